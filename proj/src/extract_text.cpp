#include <algorithm>
#include <cctype>
#include <charconv>
#include <tuple>

#include <fmt/format.h>

#include "urlx/extract.hpp"
#include "urlx/io.hpp"

namespace urlx {

namespace {

constexpr std::string_view kUrlPunct = "-._~:/?#[]@!$&'()*+,;=%";

bool ieq_prefix(std::string_view s, std::string_view lower_prefix) {
  if (s.size() < lower_prefix.size()) return false;
  for (std::size_t i = 0; i < lower_prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != lower_prefix[i]) return false;
  return true;
}

bool is_alnum_ascii(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::size_t line_break_length(std::string_view s, std::size_t pos) {
  if (pos < s.size() && s[pos] == '\n') return 1;
  if (pos + 1 < s.size() && s[pos] == '\r' && s[pos + 1] == '\n') return 2;
  return 0;
}

// True when the token already has a '/' past its authority, i.e. a truncation
// at this point would be inside the path.
bool ends_mid_path(std::string_view token) {
  const auto authority = scheme_prefix_length(token);
  return token.find('/', authority) != std::string_view::npos;
}

}  // namespace

bool is_url_char(char c) {
  return is_alnum_ascii(c) || kUrlPunct.find(c) != std::string_view::npos;
}

std::size_t scheme_prefix_length(std::string_view s) {
  for (std::string_view p : {"https://", "http://", "ftp://"})
    if (ieq_prefix(s, p)) return p.size();
  return 0;
}

bool has_accepted_scheme(std::string_view s) { return scheme_prefix_length(s) != 0; }

std::string_view rule_token(ExtractionRule r) {
  switch (r) {
    case ExtractionRule::RegexBody: return "regex_body";
    case ExtractionRule::UrlMacro: return "url_macro";
    case ExtractionRule::UrlAddrMacro: return "urladdr_macro";
    case ExtractionRule::AnchorHref: return "anchor_href";
    case ExtractionRule::TargetAttr: return "target_attr";
  }
  return "?";
}

std::optional<ExtractionRule> parse_rule(std::string_view token) {
  for (auto r : {ExtractionRule::RegexBody, ExtractionRule::UrlMacro, ExtractionRule::UrlAddrMacro,
                 ExtractionRule::AnchorHref, ExtractionRule::TargetAttr})
    if (rule_token(r) == token) return r;
  return std::nullopt;
}

bool rule_allowed(ExtractionRule rule, FormatKind format) {
  switch (rule) {
    case ExtractionRule::RegexBody:
      return format == FormatKind::Text || format == FormatKind::Latex;
    case ExtractionRule::UrlMacro:
    case ExtractionRule::UrlAddrMacro:
      return format == FormatKind::Latex;
    case ExtractionRule::AnchorHref: return format == FormatKind::Html;
    case ExtractionRule::TargetAttr: return format == FormatKind::TeiXml;
  }
  return false;
}

std::optional<WrapRepair> parse_wrap_repair(std::string_view token) {
  if (token == "none") return WrapRepair::None;
  if (token == "conservative") return WrapRepair::Conservative;
  return std::nullopt;
}

std::vector<UrlCandidate> extract_from_text(std::string_view content, const PaperId& paper_id,
                                            WrapRepair wrap_repair,
                                            const std::filesystem::path& file) {
  std::vector<UrlCandidate> out;
  const std::size_t n = content.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = content[i];
    if (c != 'h' && c != 'H' && c != 'f' && c != 'F') {
      ++i;
      continue;
    }
    const std::size_t prefix = scheme_prefix_length(content.substr(i));
    if (prefix == 0 || (i > 0 && is_alnum_ascii(content[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t end = i + prefix;
    while (end < n && is_url_char(content[end])) ++end;
    if (end == i + prefix) {
      i = end;
      continue;
    }

    std::string token(content.substr(i, end - i));
    if (wrap_repair == WrapRepair::Conservative) {
      while (const auto br = line_break_length(content, end)) {
        const std::size_t next = end + br;
        if (next >= n || !is_url_char(content[next])) break;
        // a line that opens with its own scheme is a new URL, not a continuation
        if (has_accepted_scheme(content.substr(next))) break;
        std::size_t k = next;
        while (k < n && is_url_char(content[k])) ++k;
        if (token.back() == '-' && ends_mid_path(token)) token.pop_back();
        token.append(content.substr(next, k - next));
        end = k;
      }
    }
    out.push_back({std::move(token), paper_id, FormatKind::Text, file, i, ExtractionRule::RegexBody});
    i = end;
  }
  return out;
}

void sort_candidates(std::vector<UrlCandidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.paper_id, a.format, a.byte_offset, a.file, a.raw) <
           std::tie(b.paper_id, b.format, b.byte_offset, b.file, b.raw);
  });
}

std::string format_candidates(std::span<const UrlCandidate> candidates) {
  std::string out = "# paper_id\tformat\trule\tfile\tbyte_offset\traw\n";
  for (const auto& c : candidates) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", c.paper_id.value(), format_token(c.format),
                       rule_token(c.rule), escape_field(c.file.string()), c.byte_offset, c.raw);
  }
  return out;
}

std::vector<UrlCandidate> parse_candidates(std::string_view text, const std::string& source_name) {
  std::vector<UrlCandidate> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() != 6) fail(fmt::format("expected 6 fields, got {}", cols.size()));
    const auto id = PaperId::parse(cols[0]);
    if (!id) fail(fmt::format("bad paper id '{}'", cols[0]));
    const auto format = parse_format(cols[1]);
    if (!format) fail(fmt::format("unknown format '{}'", cols[1]));
    const auto rule = parse_rule(cols[2]);
    if (!rule) fail(fmt::format("unknown rule '{}'", cols[2]));
    std::size_t offset = 0;
    const auto* end = cols[4].data() + cols[4].size();
    if (auto [p, ec] = std::from_chars(cols[4].data(), end, offset); ec != std::errc{} || p != end)
      fail(fmt::format("bad byte offset '{}'", cols[4]));
    if (cols[5].empty()) fail("empty raw URL");
    out.push_back({std::string(cols[5]), *id, *format, unescape_field(cols[3]), offset, *rule});
  });
  return out;
}

DocumentExtraction extract_document(const DocumentRecord& record, FormatSet formats,
                                    WrapRepair wrap_repair) {
  DocumentExtraction doc{record.paper_id, {}, {}, {}, {}};
  for (const auto format : formats.members()) {
    const auto& paths = record.paths(format);
    if (paths.empty()) continue;
    doc.attempted.insert(format);
    try {
      std::vector<std::string> contents;
      contents.reserve(paths.size());
      for (const auto& p : paths) contents.push_back(sanitize_utf8(read_file(p)));

      switch (format) {
        case FormatKind::Text: {
          auto c = extract_from_text(contents[0], record.paper_id, wrap_repair, paths[0]);
          doc.candidates.insert(doc.candidates.end(), c.begin(), c.end());
          break;
        }
        case FormatKind::Latex: {
          std::vector<SourceFile> files;
          for (std::size_t k = 0; k < paths.size(); ++k) files.push_back({paths[k], contents[k]});
          auto r = extract_from_latex(files, record.paper_id);
          doc.candidates.insert(doc.candidates.end(), r.candidates.begin(), r.candidates.end());
          doc.warnings.insert(doc.warnings.end(), r.warnings.begin(), r.warnings.end());
          break;
        }
        case FormatKind::Html: {
          auto c = extract_from_html(contents[0], record.paper_id, paths[0]);
          doc.candidates.insert(doc.candidates.end(), c.begin(), c.end());
          break;
        }
        case FormatKind::TeiXml: {
          auto c = extract_from_tei(contents[0], record.paper_id, paths[0]);
          doc.candidates.insert(doc.candidates.end(), c.begin(), c.end());
          break;
        }
      }
    } catch (const Error& e) {
      doc.failures[format] = e.what();
    }
  }
  return doc;
}

}  // namespace urlx
