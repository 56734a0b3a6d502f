#pragma once

#include <map>
#include <span>
#include <vector>

#include "urlx/canon.hpp"

namespace urlx {

/// Union of the sets whose format is in `selected`. A selected format with
/// no set for this paper contributes nothing. Throws if selected is empty or
/// the sets belong to different papers.
ExtractionSet combine(std::span<const ExtractionSet> sets, FormatSet selected);

/// The 15 non-empty format subsets: by size, then by format order
/// (Text, LaTeX, HTML, XML) within a size.
std::vector<FormatSet> enumerate_combinations();

/// Per-format sets keyed by paper. Input sets must be single-format.
std::map<PaperId, std::vector<ExtractionSet>> group_by_paper(std::span<const ExtractionSet> sets);

/// combine() applied to every paper.
std::vector<ExtractionSet> combine_all(const std::map<PaperId, std::vector<ExtractionSet>>& by_paper,
                                       FormatSet selected);

}  // namespace urlx
