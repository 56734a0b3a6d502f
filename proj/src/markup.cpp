#include "markup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "urlx/extract.hpp"

namespace urlx::markup {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

namespace {

struct NamedEntity {
  std::string_view name;
  std::string_view text;
  bool xml;
};

constexpr NamedEntity kEntities[] = {
    {"amp", "&", true},        {"lt", "<", true},          {"gt", ">", true},
    {"quot", "\"", true},      {"apos", "'", true},        {"nbsp", "\xC2\xA0", false},
    {"ndash", "\xE2\x80\x93", false}, {"mdash", "\xE2\x80\x94", false},
    {"tilde", "~", false},     {"sol", "/", false},        {"colon", ":", false},
    {"num", "#", false},       {"percnt", "%", false},     {"equals", "=", false},
    {"quest", "?", false},     {"lowbar", "_", false},
};

bool valid_xml_char(char32_t cp) {
  return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
         (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
}

}  // namespace

std::optional<std::string> decode_reference(std::string_view s, bool html_names,
                                            std::size_t& consumed) {
  if (s.empty() || s[0] != '&') return std::nullopt;
  const auto semi = s.find(';');
  if (semi == std::string_view::npos || semi < 2 || semi > 40) return std::nullopt;
  const auto body = s.substr(1, semi - 1);
  std::string out;
  if (body[0] == '#') {
    std::uint32_t cp = 0;
    const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    const auto digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return std::nullopt;
    const auto* end = digits.data() + digits.size();
    auto [p, ec] = std::from_chars(digits.data(), end, cp, hex ? 16 : 10);
    if (ec != std::errc{} || p != end || !valid_xml_char(cp)) return std::nullopt;
    append_utf8(out, cp);
  } else {
    const auto it = std::find_if(std::begin(kEntities), std::end(kEntities),
                                 [&](const NamedEntity& e) { return e.name == body; });
    if (it == std::end(kEntities) || (!it->xml && !html_names)) return std::nullopt;
    out = it->text;
  }
  consumed = semi + 1;
  return out;
}

std::string decode_entities_lenient(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      std::size_t used = 0;
      if (auto dec = decode_reference(s.substr(i), true, used)) {
        out += *dec;
        i += used;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

namespace {

bool name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}
bool name_char(unsigned char c) {
  return name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class XmlScanner {
 public:
  using Callback = std::function<void(std::string_view, const std::vector<Attribute>&)>;

  XmlScanner(std::string_view doc, const Callback& cb) : d_(doc), cb_(cb) {}

  void run() {
    if (starts("\xEF\xBB\xBF")) p_ += 3;
    if (starts("<?xml") && p_ + 5 < d_.size() && is_space(d_[p_ + 5])) {
      const auto end = d_.find("?>", p_);
      if (end == std::string_view::npos) fail(p_, "unterminated XML declaration");
      p_ = end + 2;
    }
    bool seen_doctype = false;
    while (true) {
      misc();
      if (p_ >= d_.size()) fail(p_, "no root element");
      if (starts("<!DOCTYPE")) {
        if (seen_doctype) fail(p_, "second DOCTYPE");
        seen_doctype = true;
        doctype();
        continue;
      }
      break;
    }
    if (d_[p_] != '<') fail(p_, "text before root element");
    element();
    misc();
    if (p_ < d_.size()) fail(p_, d_[p_] == '<' ? "second root element" : "text after root element");
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    at = std::min(at, d_.size());
    const auto before = d_.substr(0, at);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n'));
    const auto nl = before.rfind('\n');
    const std::size_t col = 1 + (nl == std::string_view::npos ? at : at - nl - 1);
    throw XmlError(line, col, msg);
  }

  bool starts(std::string_view s) const { return d_.substr(p_, s.size()) == s; }

  void skip_ws() {
    while (p_ < d_.size() && is_space(d_[p_])) ++p_;
  }

  void check_char(std::size_t at) const {
    const auto c = static_cast<unsigned char>(d_[at]);
    if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') fail(at, "control character not allowed");
  }

  std::string_view name() {
    const auto start = p_;
    if (p_ >= d_.size() || !name_start(static_cast<unsigned char>(d_[p_]))) fail(p_, "expected a name");
    while (p_ < d_.size() && name_char(static_cast<unsigned char>(d_[p_]))) ++p_;
    return d_.substr(start, p_ - start);
  }

  // Comments, processing instructions and whitespace outside the root.
  void misc() {
    while (true) {
      skip_ws();
      if (starts("<!--")) comment();
      else if (starts("<?")) pi();
      else return;
    }
  }

  void comment() {
    const auto start = p_;
    const auto end = d_.find("-->", p_ + 4);
    if (end == std::string_view::npos) fail(start, "unterminated comment");
    if (d_.substr(p_ + 4, end - p_ - 4).find("--") != std::string_view::npos)
      fail(start, "'--' inside comment");
    p_ = end + 3;
  }

  void pi() {
    const auto start = p_;
    p_ += 2;
    const auto target = name();
    if (target.size() == 3 && std::tolower(target[0]) == 'x' && std::tolower(target[1]) == 'm' &&
        std::tolower(target[2]) == 'l')
      fail(start, "XML declaration not at document start");
    const auto end = d_.find("?>", p_);
    if (end == std::string_view::npos) fail(start, "unterminated processing instruction");
    p_ = end + 2;
  }

  void doctype() {
    const auto start = p_;
    p_ += 9;
    int bracket = 0;
    while (p_ < d_.size()) {
      const char c = d_[p_];
      if (c == '"' || c == '\'') {
        const auto close = d_.find(c, p_ + 1);
        if (close == std::string_view::npos) break;
        p_ = close + 1;
        continue;
      }
      if (c == '[') ++bracket;
      else if (c == ']') --bracket;
      else if (c == '>' && bracket <= 0) {
        ++p_;
        return;
      }
      ++p_;
    }
    fail(start, "unterminated DOCTYPE");
  }

  void reference() {
    std::size_t used = 0;
    if (!decode_reference(d_.substr(p_), false, used)) fail(p_, "invalid character or entity reference");
    p_ += used;
  }

  // Parses a start tag at p_ ('<'), reports it, returns (name, self_closing).
  std::pair<std::string_view, bool> start_tag() {
    const auto tag_start = p_;
    ++p_;
    const auto tag = name();
    std::vector<Attribute> attrs;
    std::set<std::string_view> seen;
    while (true) {
      const auto before_ws = p_;
      skip_ws();
      if (p_ >= d_.size()) fail(tag_start, "unterminated start tag <" + std::string(tag) + ">");
      if (d_[p_] == '>') {
        ++p_;
        cb_(tag, attrs);
        return {tag, false};
      }
      if (starts("/>")) {
        p_ += 2;
        cb_(tag, attrs);
        return {tag, true};
      }
      if (p_ == before_ws) fail(p_, "expected whitespace before attribute");
      const auto attr_name = name();
      if (!seen.insert(attr_name).second) fail(p_, "duplicate attribute '" + std::string(attr_name) + "'");
      skip_ws();
      if (p_ >= d_.size() || d_[p_] != '=') fail(p_, "expected '=' after attribute name");
      ++p_;
      skip_ws();
      if (p_ >= d_.size() || (d_[p_] != '"' && d_[p_] != '\'')) fail(p_, "attribute value must be quoted");
      const char quote = d_[p_++];
      const auto value_offset = p_;
      std::string value;
      while (true) {
        if (p_ >= d_.size()) fail(value_offset, "unterminated attribute value");
        const char c = d_[p_];
        if (c == quote) break;
        if (c == '<') fail(p_, "'<' in attribute value");
        if (c == '&') {
          std::size_t used = 0;
          auto dec = decode_reference(d_.substr(p_), false, used);
          if (!dec) fail(p_, "invalid character or entity reference");
          value += *dec;
          p_ += used;
          continue;
        }
        check_char(p_);
        value.push_back(c);
        ++p_;
      }
      ++p_;
      attrs.push_back({attr_name, std::move(value), value_offset});
    }
  }

  void element() {
    std::vector<std::string_view> open;
    auto [root, empty] = start_tag();
    if (empty) return;
    open.push_back(root);
    while (!open.empty()) {
      if (p_ >= d_.size()) fail(p_, "unclosed element <" + std::string(open.back()) + ">");
      const char c = d_[p_];
      if (c == '<') {
        if (starts("</")) {
          const auto at = p_;
          p_ += 2;
          const auto closing = name();
          skip_ws();
          if (p_ >= d_.size() || d_[p_] != '>') fail(p_, "malformed end tag");
          ++p_;
          if (closing != open.back())
            fail(at, "end tag </" + std::string(closing) + "> does not match <" +
                         std::string(open.back()) + ">");
          open.pop_back();
        } else if (starts("<!--")) {
          comment();
        } else if (starts("<![CDATA[")) {
          const auto end = d_.find("]]>", p_);
          if (end == std::string_view::npos) fail(p_, "unterminated CDATA section");
          p_ = end + 3;
        } else if (starts("<?")) {
          pi();
        } else if (starts("<!")) {
          fail(p_, "markup declaration inside content");
        } else {
          auto [child, child_empty] = start_tag();
          if (!child_empty) open.push_back(child);
        }
      } else if (c == '&') {
        reference();
      } else {
        if (starts("]]>")) fail(p_, "']]>' in content");
        check_char(p_);
        ++p_;
      }
    }
  }

  std::string_view d_;
  const Callback& cb_;
  std::size_t p_ = 0;
};

}  // namespace

void scan_xml(std::string_view doc,
              const std::function<void(std::string_view, const std::vector<Attribute>&)>& on_element) {
  XmlScanner(doc, on_element).run();
}

}  // namespace urlx::markup
