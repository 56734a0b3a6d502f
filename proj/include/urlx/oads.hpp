#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "urlx/evalkit.hpp"

namespace urlx {

enum class OadsProvenance : std::uint8_t { Override, HostRule, PathRule, Default };
std::string_view provenance_token(OadsProvenance p);

struct PathRule {
  std::string host_suffix;
  std::string path_prefix;
};

/// Rule-based approximation of the open-access dataset/software label.
/// Host suffixes match on a label boundary: "github.com" matches
/// "github.com" and "gist.github.com" but not "notgithub.com".
struct OadsRuleSet {
  std::vector<std::string> host_suffixes;
  std::vector<PathRule> path_patterns;
  std::map<PaperUrl, bool> overrides;
};

struct OadsDecision {
  bool oads = false;
  OadsProvenance provenance = OadsProvenance::Default;
};

OadsDecision classify(const CanonicalUrl& url, const PaperId& paper_id, const OadsRuleSet& rules);

/// Sections [hosts], [paths], [overrides]; one entry per line, '#' comments.
///   [hosts]      github.com
///   [paths]      <host_suffix> <path_prefix>
///   [overrides]  <paper_id> <url> <0|1>
/// Throws ParseError with the offending line number.
OadsRuleSet parse_rules(std::string_view text, const std::string& source_name = "<rules>");
OadsRuleSet load_rules(const std::filesystem::path& path);

struct OadsSummaryRow {
  std::size_t oads_count = 0;
  std::size_t valid_count = 0;
  /// oads_count / valid_count rounded to 3 decimals; 0 when valid_count is 0.
  double fraction = 0.0;
  bool degenerate = false;
};

/// Per format: how many of its valid URLs carry the ground-truth OADS label.
/// Throws if a listed URL has no ground-truth entry.
std::map<FormatKind, OadsSummaryRow> oads_summary(const std::map<FormatKind, std::set<PaperUrl>>& per_format_valid,
                                                  const GroundTruth& labels);

std::string render_oads_table(const std::map<FormatKind, OadsSummaryRow>& rows, const GroundTruth& labels);

}  // namespace urlx
