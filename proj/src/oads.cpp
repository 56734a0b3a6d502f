#include "urlx/oads.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "urlx/io.hpp"

namespace urlx {

namespace {

bool host_matches(std::string_view host, std::string_view suffix) {
  if (host == suffix) return true;
  return host.size() > suffix.size() && host.substr(host.size() - suffix.size()) == suffix &&
         host[host.size() - suffix.size() - 1] == '.';
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool valid_suffix(std::string_view s) {
  return !s.empty() && s.find("://") == std::string_view::npos && s.find('/') == std::string_view::npos &&
         std::none_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

std::string_view provenance_token(OadsProvenance p) {
  switch (p) {
    case OadsProvenance::Override: return "override";
    case OadsProvenance::HostRule: return "host_rule";
    case OadsProvenance::PathRule: return "path_rule";
    case OadsProvenance::Default: return "default";
  }
  return "?";
}

OadsDecision classify(const CanonicalUrl& url, const PaperId& paper_id, const OadsRuleSet& rules) {
  if (const auto it = rules.overrides.find(PaperUrl{paper_id, url}); it != rules.overrides.end())
    return {it->second, OadsProvenance::Override};
  for (const auto& suffix : rules.host_suffixes)
    if (host_matches(url.host(), suffix)) return {true, OadsProvenance::HostRule};
  for (const auto& rule : rules.path_patterns)
    if (host_matches(url.host(), rule.host_suffix) && url.path().starts_with(rule.path_prefix))
      return {true, OadsProvenance::PathRule};
  return {false, OadsProvenance::Default};
}

OadsRuleSet parse_rules(std::string_view text, const std::string& source_name) {
  OadsRuleSet rules;
  enum class Section { None, Hosts, Paths, Overrides } section = Section::None;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    if (line.front() == '[') {
      if (line == "[hosts]") section = Section::Hosts;
      else if (line == "[paths]") section = Section::Paths;
      else if (line == "[overrides]") section = Section::Overrides;
      else fail(fmt::format("unknown section {}", line));
      return;
    }
    const auto f = fields(line);
    switch (section) {
      case Section::None:
        fail("entry before any section header");
        break;
      case Section::Hosts:
        if (f.size() != 1 || !valid_suffix(f[0])) fail(fmt::format("bad host suffix '{}'", line));
        rules.host_suffixes.emplace_back(f[0]);
        break;
      case Section::Paths:
        if (f.size() != 2 || !valid_suffix(f[0]) || f[1].front() != '/')
          fail(fmt::format("bad path rule '{}' (want: host_suffix /path/prefix)", line));
        rules.path_patterns.push_back({std::string(f[0]), std::string(f[1])});
        break;
      case Section::Overrides: {
        if (f.size() != 3) fail("override needs: paper_id url 0|1");
        const auto id = PaperId::parse(f[0]);
        if (!id) fail(fmt::format("bad paper id '{}'", f[0]));
        const auto url = canonicalize(f[1]);
        if (!url) fail(fmt::format("not a URL: '{}'", f[1]));
        if (f[2] != "0" && f[2] != "1") fail(fmt::format("override label must be 0 or 1, got '{}'", f[2]));
        rules.overrides.insert_or_assign(PaperUrl{*id, *url}, f[2] == "1");
        break;
      }
    }
  });
  return rules;
}

OadsRuleSet load_rules(const std::filesystem::path& path) { return parse_rules(read_file(path), path.string()); }

std::map<FormatKind, OadsSummaryRow> oads_summary(const std::map<FormatKind, std::set<PaperUrl>>& per_format_valid,
                                                  const GroundTruth& labels) {
  std::map<FormatKind, OadsSummaryRow> out;
  for (const auto& [format, items] : per_format_valid) {
    OadsSummaryRow row;
    for (const auto& [id, url] : items) {
      const auto* e = labels.find(id, url);
      if (!e) throw Error(fmt::format("no ground-truth label for {} {}", id.value(), url.value()));
      ++row.valid_count;
      if (e->oads) ++row.oads_count;
    }
    row.degenerate = row.valid_count == 0;
    if (!row.degenerate)
      row.fraction = std::round(1000.0 * static_cast<double>(row.oads_count) / static_cast<double>(row.valid_count)) / 1000.0;
    out[format] = row;
  }
  return out;
}

std::string render_oads_table(const std::map<FormatKind, OadsSummaryRow>& rows, const GroundTruth& labels) {
  std::string out = fmt::format("{:<14}  {:>6}  {:>6}  {:>8}\n", "Format", "Valid", "OADS", "Fraction");
  out += std::string(40, '-') + "\n";
  for (const auto& [format, r] : rows)
    out += fmt::format("{:<14}  {:>6}  {:>6}  {:>7.1f}%\n", format_label(format), r.valid_count, r.oads_count,
                       100.0 * r.fraction);
  const auto valid = labels.valid_count();
  const auto oads = labels.oads_count();
  out += fmt::format("{:<14}  {:>6}  {:>6}  {:>7.1f}%\n", "Ground truth", valid, oads,
                     valid ? 100.0 * static_cast<double>(oads) / static_cast<double>(valid) : 0.0);
  return out;
}

}  // namespace urlx
