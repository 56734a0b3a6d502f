#include <algorithm>
#include <cctype>

#include "markup.hpp"
#include "urlx/extract.hpp"
#include "urlx/io.hpp"

namespace urlx {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return lower(x) == lower(y); });
}

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i)
    if (iequals(hay.substr(i, needle.size()), needle)) return i;
  return std::string_view::npos;
}

// Trimmed value must be a single URL token with an accepted scheme.
std::optional<std::pair<std::string, std::size_t>> accept_value(std::string_view value,
                                                                 std::size_t offset) {
  std::size_t lead = 0;
  while (lead < value.size() && is_space(value[lead])) ++lead;
  const auto t = trim(value);
  if (t.empty() || !has_accepted_scheme(t)) return std::nullopt;
  if (std::any_of(t.begin(), t.end(), is_space)) return std::nullopt;
  return std::pair{std::string(t), offset + lead};
}

struct HtmlAttr {
  std::string_view name;
  std::string_view raw_value;
  std::size_t value_offset;
};

// Tolerant tag reader. `p` points just past the tag name; on return it
// points past the closing '>' (or at end of input when the tag never closes).
std::vector<HtmlAttr> read_html_attributes(std::string_view s, std::size_t& p, bool& complete) {
  std::vector<HtmlAttr> attrs;
  const std::size_t n = s.size();
  complete = false;
  while (p < n) {
    while (p < n && is_space(s[p])) ++p;
    if (p >= n) break;
    if (s[p] == '>') {
      ++p;
      complete = true;
      return attrs;
    }
    if (s[p] == '/') {
      ++p;
      continue;
    }
    const std::size_t name_start = p;
    while (p < n && !is_space(s[p]) && s[p] != '>' && s[p] != '/' && s[p] != '=') ++p;
    if (p == name_start) {  // stray '='
      ++p;
      continue;
    }
    HtmlAttr attr{s.substr(name_start, p - name_start), {}, p};
    std::size_t q = p;
    while (q < n && is_space(s[q])) ++q;
    if (q < n && s[q] == '=') {
      ++q;
      while (q < n && is_space(s[q])) ++q;
      if (q < n && (s[q] == '"' || s[q] == '\'')) {
        const char quote = s[q];
        const auto close = s.find(quote, q + 1);
        if (close == std::string_view::npos) {
          p = n;
          return attrs;
        }
        attr.value_offset = q + 1;
        attr.raw_value = s.substr(q + 1, close - q - 1);
        p = close + 1;
      } else {
        const std::size_t v = q;
        while (q < n && !is_space(s[q]) && s[q] != '>') ++q;
        attr.value_offset = v;
        attr.raw_value = s.substr(v, q - v);
        p = q;
      }
    }
    attrs.push_back(attr);
  }
  return attrs;
}

}  // namespace

std::vector<UrlCandidate> extract_from_html(std::string_view s, const PaperId& paper_id,
                                            const std::filesystem::path& file) {
  std::vector<UrlCandidate> out;
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    const std::size_t lt = s.find('<', i);
    if (lt == std::string_view::npos) break;
    if (s.substr(lt, 4) == "<!--") {
      const auto end = s.find("-->", lt + 4);
      i = end == std::string_view::npos ? n : end + 3;
      continue;
    }
    if (lt + 1 < n && (s[lt + 1] == '!' || s[lt + 1] == '?' || s[lt + 1] == '/')) {
      const auto end = s.find('>', lt + 1);
      i = end == std::string_view::npos ? n : end + 1;
      continue;
    }
    std::size_t p = lt + 1;
    while (p < n && std::isalnum(static_cast<unsigned char>(s[p]))) ++p;
    if (p == lt + 1) {
      i = lt + 1;  // bare '<' in text
      continue;
    }
    const auto tag = s.substr(lt + 1, p - lt - 1);
    bool complete = false;
    const auto attrs = read_html_attributes(s, p, complete);
    i = p;
    if (!complete) continue;

    if (iequals(tag, "a")) {
      const auto href = std::find_if(attrs.begin(), attrs.end(),
                                     [](const HtmlAttr& a) { return iequals(a.name, "href"); });
      if (href != attrs.end()) {
        const std::string value = markup::decode_entities_lenient(href->raw_value);
        // Offsets refer to the undecoded file bytes; leading whitespace needs
        // no entity handling so the shift is exact.
        if (auto hit = accept_value(value, href->value_offset))
          out.push_back({std::move(hit->first), paper_id, FormatKind::Html, file, hit->second,
                         ExtractionRule::AnchorHref});
      }
    } else if (iequals(tag, "script") || iequals(tag, "style")) {
      const std::string closing = "</" + std::string(tag);
      const auto end = ifind(s, closing, i);
      i = end == std::string_view::npos ? n : end;
    }
  }
  return out;
}

std::vector<UrlCandidate> extract_from_tei(std::string_view content, const PaperId& paper_id,
                                           const std::filesystem::path& file) {
  std::vector<UrlCandidate> out;
  markup::scan_xml(content, [&](std::string_view, const std::vector<markup::Attribute>& attrs) {
    for (const auto& a : attrs) {
      if (a.name != "target") continue;
      // `target` is a whitespace-separated pointer list; offsets are exact
      // only for values without entity references.
      std::size_t pos = 0;
      const std::string_view v = a.value;
      while (pos < v.size()) {
        while (pos < v.size() && is_space(v[pos])) ++pos;
        std::size_t end = pos;
        while (end < v.size() && !is_space(v[end])) ++end;
        if (end > pos) {
          const auto token = v.substr(pos, end - pos);
          if (has_accepted_scheme(token))
            out.push_back({std::string(token), paper_id, FormatKind::TeiXml, file,
                           a.value_offset + pos, ExtractionRule::TargetAttr});
        }
        pos = end;
      }
    }
  });
  return out;
}

}  // namespace urlx
