#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urlx/canon.hpp"
#include "urlx/ensemble.hpp"

namespace urlx {

/// Validity is per (paper, URL): the same URL in two papers is two entries.
using PaperUrl = std::pair<PaperId, CanonicalUrl>;

struct GroundTruthEntry {
  PaperId paper_id;
  CanonicalUrl url;
  bool valid = false;  // appears in the PDF
  bool oads = false;   // only ever true for valid entries
};

class GroundTruth {
 public:
  GroundTruth() = default;
  /// Throws urlx::Error on duplicate (paper, url) or oads without valid.
  explicit GroundTruth(std::vector<GroundTruthEntry> entries);

  const std::vector<GroundTruthEntry>& entries() const { return entries_; }
  const GroundTruthEntry* find(const PaperId& id, const CanonicalUrl& url) const;
  const std::set<PaperUrl>& valid_set() const { return valid_; }
  std::size_t valid_count() const { return valid_.size(); }
  std::size_t oads_count() const;

 private:
  std::vector<GroundTruthEntry> entries_;
  std::map<PaperUrl, std::size_t> index_;
  std::set<PaperUrl> valid_;
};

/// Rows: paper_id TAB url TAB valid(0|1) TAB oads(0|1); '#' starts a comment.
GroundTruth parse_ground_truth(std::string_view text, const std::string& source_name = "<ground-truth>");
GroundTruth load_ground_truth(const std::filesystem::path& path);
std::string format_ground_truth(const GroundTruth& gt);

/// Every extracted (paper, url) from any format plus all ground-truth valid
/// pairs; the value says whether the pair is valid.
std::map<PaperUrl, bool> build_superset(std::span<const ExtractionSet> all_sets,
                                        const std::set<PaperUrl>& gt_valid);

struct EvalReport {
  FormatSet combination;
  std::size_t valid_count = 0;
  std::size_t total_extracted = 0;
  std::size_t ground_truth_valid = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Nothing was extracted, so precision is reported as 0 instead of 0/0.
  bool degenerate = false;
};

/// Micro-averaged metrics of one combination. `combined` holds one set per
/// paper. Throws if the ground truth has no valid entry.
EvalReport evaluate(std::span<const ExtractionSet> combined, const GroundTruth& gt);

/// evaluate() for each combination over per-format sets grouped by paper.
std::vector<EvalReport> evaluate_combinations(const std::map<PaperId, std::vector<ExtractionSet>>& by_paper,
                                              const GroundTruth& gt, std::span<const FormatSet> combinations);

/// For each format, the valid (paper, url) pairs it extracted.
std::map<FormatKind, std::set<PaperUrl>> valid_by_format(
    const std::map<PaperId, std::vector<ExtractionSet>>& by_paper, const GroundTruth& gt);

/// Exact-membership region counts of a Venn diagram over 2-4 formats.
/// Keys are the membership sets; all 2^k - 1 regions are present, zeros
/// included. Counts partition the union of the inputs.
std::map<FormatSet, std::size_t> overlap(const std::map<FormatKind, std::set<PaperUrl>>& per_format);

/// One tab-separated record per report, full precision.
std::string format_reports(std::span<const EvalReport> reports);
/// Console table: Format, V. URLs, P, R, F1 (2 decimals).
std::string render_report_table(std::span<const EvalReport> reports);

}  // namespace urlx
