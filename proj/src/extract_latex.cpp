#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "urlx/extract.hpp"

namespace urlx {

namespace {

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_blank(char c) { return c == ' ' || c == '\t'; }
bool is_ws(char c) { return is_blank(c) || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// A brace argument may not run across a paragraph break.
bool blank_line_at(std::string_view s, std::size_t pos) {
  if (s[pos] != '\n') return false;
  std::size_t k = pos + 1;
  while (k < s.size() && (is_blank(s[k]) || s[k] == '\r')) ++k;
  return k < s.size() && s[k] == '\n';
}

// Index of the '}' closing the group opened at `open`, or npos.
std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 1;
  for (std::size_t k = open + 1; k < s.size(); ++k) {
    const char c = s[k];
    if (c == '\\') {
      ++k;
      continue;
    }
    if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return k;
    else if (blank_line_at(s, k)) return std::string_view::npos;
  }
  return std::string_view::npos;
}

struct MacroSpec {
  std::string_view name;
  ExtractionRule rule;
};

constexpr MacroSpec kMacros[] = {
    {"url", ExtractionRule::UrlMacro},
    {"urladdr", ExtractionRule::UrlAddrMacro},
    {"href", ExtractionRule::UrlMacro},
};

// Lexical pass over one file. Collects macro captures and returns a copy of
// the source with comments and captured macro arguments blanked to spaces,
// so the token scan sees neither and byte offsets stay aligned.
std::string lex_file(const SourceFile& file, const PaperId& paper_id, LatexExtraction& result,
                     std::vector<UrlCandidate>& macro_hits) {
  const std::string_view s = file.content;
  std::string masked(s);
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = s[i];
    if (c == '%') {
      while (i < n && s[i] != '\n') masked[i++] = ' ';
      continue;
    }
    if (c != '\\') {
      ++i;
      continue;
    }
    std::size_t name_end = i + 1;
    while (name_end < n && is_letter(s[name_end])) ++name_end;
    if (name_end == i + 1) {
      i += 2;  // control symbol such as \% or a double backslash
      continue;
    }
    const auto name = s.substr(i + 1, name_end - i - 1);
    const auto* macro = std::find_if(std::begin(kMacros), std::end(kMacros),
                                     [&](const MacroSpec& m) { return m.name == name; });
    if (macro == std::end(kMacros)) {
      i = name_end;
      continue;
    }
    std::size_t open = name_end;
    while (open < n && is_blank(s[open])) ++open;
    if (open >= n || s[open] != '{') {
      i = name_end;
      continue;
    }
    const std::size_t close = matching_brace(s, open);
    if (close == std::string_view::npos) {
      result.warnings.push_back(
          {file.path, i, fmt::format("unbalanced brace in \\{} argument; macro skipped", name)});
      i = name_end;
      continue;
    }
    // TeX's \url ignores spaces and line breaks inside its argument.
    std::size_t first = open + 1;
    while (first < close && is_ws(s[first])) ++first;
    std::string arg;
    for (std::size_t k = first; k < close; ++k)
      if (!is_ws(s[k])) arg.push_back(s[k]);
    if (!arg.empty() && has_accepted_scheme(arg))
      macro_hits.push_back({std::move(arg), paper_id, FormatKind::Latex, file.path, first, macro->rule});
    for (std::size_t k = open + 1; k < close; ++k) masked[k] = ' ';
    i = close + 1;
  }
  return masked;
}

}  // namespace

LatexExtraction extract_from_latex(std::span<const SourceFile> files, const PaperId& paper_id) {
  LatexExtraction result;
  for (const auto& file : files) {
    std::vector<UrlCandidate> hits;
    const std::string masked = lex_file(file, paper_id, result, hits);
    for (auto& c : extract_from_text(masked, paper_id, WrapRepair::None, file.path)) {
      c.format = FormatKind::Latex;
      hits.push_back(std::move(c));
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const auto& a, const auto& b) { return a.byte_offset < b.byte_offset; });
    result.candidates.insert(result.candidates.end(), std::make_move_iterator(hits.begin()),
                             std::make_move_iterator(hits.end()));
  }
  return result;
}

}  // namespace urlx
