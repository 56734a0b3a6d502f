#include "urlx/canon.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include <fmt/format.h>

#include "urlx/io.hpp"

namespace urlx {

namespace {

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

char opener_of(char closer) {
  switch (closer) {
    case ')': return '(';
    case ']': return '[';
    case '}': return '{';
  }
  return 0;
}

}  // namespace

std::string_view CanonicalUrl::path() const {
  std::string_view rest = std::string_view(value_).substr(path_begin_);
  return rest.substr(0, rest.find_first_of("?#"));
}

std::optional<CanonicalUrl> canonicalize(std::string_view raw) {
  const std::size_t prefix = scheme_prefix_length(raw);
  if (prefix == 0) return std::nullopt;
  // A URL is one token; anything with whitespace or control bytes is not.
  if (std::any_of(raw.begin(), raw.end(), [](char c) { return static_cast<unsigned char>(c) <= 0x20 || c == 0x7f; }))
    return std::nullopt;

  std::string s(raw);
  while (s.size() > prefix) {
    const char last = s.back();
    if (kTrimSet.find(last) != std::string_view::npos) {
      s.pop_back();
      continue;
    }
    if (const char open = opener_of(last)) {
      const auto body = std::string_view(s).substr(prefix);
      const auto opens = std::count(body.begin(), body.end(), open);
      const auto closes = std::count(body.begin(), body.end(), last);
      if (closes > opens) {
        s.pop_back();
        continue;
      }
    }
    break;
  }

  const std::size_t auth_end = std::min(s.find_first_of("/?#", prefix), s.size());
  std::size_t host_begin = prefix;
  if (const auto at = std::string_view(s).substr(prefix, auth_end - prefix).rfind('@');
      at != std::string_view::npos)
    host_begin = prefix + at + 1;
  std::size_t host_end = auth_end;
  if (host_begin < auth_end && s[host_begin] == '[') {
    const auto close = s.find(']', host_begin);
    host_end = (close == std::string::npos || close >= auth_end) ? auth_end : close + 1;
  } else {
    host_end = std::min(s.find(':', host_begin), auth_end);
  }
  if (host_end <= host_begin) return std::nullopt;

  CanonicalUrl url;
  for (std::size_t k = 0; k < prefix; ++k) s[k] = ascii_lower(s[k]);
  for (std::size_t k = host_begin; k < host_end; ++k) s[k] = ascii_lower(s[k]);
  url.scheme_ = s.substr(0, prefix - 3);
  url.host_ = s.substr(host_begin, host_end - host_begin);
  url.path_begin_ = auth_end;
  url.value_ = std::move(s);
  return url;
}

bool is_self_reference(const CanonicalUrl& url, const PaperId& paper_id) {
  const std::string_view host = url.host();
  if (host != "arxiv.org" && !ends_with(host, ".arxiv.org")) return false;
  const std::string_view path = url.path();
  const std::string_view id = paper_id.value();
  for (std::string_view route : {"/abs/", "/pdf/", "/format/", "/html/"}) {
    for (auto pos = path.find(route); pos != std::string_view::npos; pos = path.find(route, pos + 1)) {
      std::string_view rest = path.substr(pos + route.size());
      if (rest.substr(0, 6) == "arXiv:") rest.remove_prefix(6);
      if (rest.substr(0, id.size()) != id) continue;
      rest.remove_prefix(id.size());
      if (!rest.empty() && rest[0] == 'v') {
        std::size_t d = 1;
        while (d < rest.size() && std::isdigit(static_cast<unsigned char>(rest[d]))) ++d;
        if (d > 1) rest.remove_prefix(d);
      }
      if (rest.empty() || rest[0] == '/' || rest == ".pdf") return true;
    }
  }
  return false;
}

std::set<CanonicalUrl> filter_self_refs(const std::set<CanonicalUrl>& urls, const PaperId& paper_id) {
  std::set<CanonicalUrl> out;
  for (const auto& u : urls)
    if (!is_self_reference(u, paper_id)) out.insert(out.end(), u);
  return out;
}

ExtractionSet build_format_set(std::span<const UrlCandidate> candidates, FormatKind format,
                               const PaperId& paper_id) {
  std::set<CanonicalUrl> canonical;
  for (const auto& c : candidates) {
    if (c.format != format || c.paper_id != paper_id) continue;
    if (auto u = canonicalize(c.raw)) canonical.insert(*std::move(u));
  }
  return {paper_id, FormatSet{format}, filter_self_refs(canonical, paper_id)};
}

std::vector<ExtractionSet> build_format_sets(std::span<const UrlCandidate> candidates) {
  std::map<std::pair<PaperId, FormatKind>, std::vector<UrlCandidate>> groups;
  for (const auto& c : candidates) groups[{c.paper_id, c.format}].push_back(c);
  std::vector<ExtractionSet> out;
  out.reserve(groups.size());
  for (const auto& [key, group] : groups) out.push_back(build_format_set(group, key.second, key.first));
  return out;
}

std::string format_extraction_sets(std::span<const ExtractionSet> sets) {
  std::vector<const ExtractionSet*> order;
  for (const auto& s : sets) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->paper_id, a->formats) < std::tie(b->paper_id, b->formats);
  });
  std::string out = "# paper_id\tformats\turl\n";
  for (const auto* s : order) {
    const auto formats = s->formats.tokens(',');
    for (const auto& u : s->urls) out += fmt::format("{}\t{}\t{}\n", s->paper_id.value(), formats, u.value());
  }
  return out;
}

std::vector<ExtractionSet> parse_extraction_sets(std::string_view text, const std::string& source_name) {
  std::map<std::pair<PaperId, FormatSet>, std::set<CanonicalUrl>> groups;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() < 3) fail(fmt::format("expected 3 fields, got {}", cols.size()));
    const auto id = PaperId::parse(cols[0]);
    if (!id) fail(fmt::format("bad paper id '{}'", cols[0]));
    const auto formats = FormatSet::parse(cols[1]);
    if (!formats || formats->empty()) fail(fmt::format("bad formats '{}'", cols[1]));
    const auto url = canonicalize(cols[2]);
    if (!url || url->value() != cols[2]) fail(fmt::format("url is not canonical: '{}'", cols[2]));
    groups[{*id, *formats}].insert(*url);
  });
  std::vector<ExtractionSet> out;
  for (auto& [key, urls] : groups) out.push_back({key.first, key.second, std::move(urls)});
  return out;
}

}  // namespace urlx
