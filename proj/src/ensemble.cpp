#include "urlx/ensemble.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "urlx/error.hpp"

namespace urlx {

ExtractionSet combine(std::span<const ExtractionSet> sets, FormatSet selected) {
  if (selected.empty()) throw Error("combine: no formats selected");
  if (sets.empty()) throw Error("combine: no sets given (paper id unknown)");
  ExtractionSet out{sets.front().paper_id, selected, {}};
  for (const auto& s : sets) {
    if (s.paper_id != out.paper_id)
      throw Error(fmt::format("combine: mixed papers {} and {}", out.paper_id.value(), s.paper_id.value()));
    if (s.formats.is_subset_of(selected)) out.urls.insert(s.urls.begin(), s.urls.end());
  }
  return out;
}

std::vector<FormatSet> enumerate_combinations() {
  std::vector<FormatSet> out;
  for (std::uint8_t bits = 1; bits < 16; ++bits) out.push_back(FormatSet::from_bits(bits));
  // Within one size, compare member lists in format order (Text first).
  std::stable_sort(out.begin(), out.end(), [](FormatSet a, FormatSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
  return out;
}

std::map<PaperId, std::vector<ExtractionSet>> group_by_paper(std::span<const ExtractionSet> sets) {
  std::map<PaperId, std::vector<ExtractionSet>> out;
  for (const auto& s : sets) {
    if (s.formats.size() != 1)
      throw Error(fmt::format("expected a single-format set for {}, got '{}'", s.paper_id.value(),
                              s.formats.tokens()));
    out[s.paper_id].push_back(s);
  }
  return out;
}

std::vector<ExtractionSet> combine_all(const std::map<PaperId, std::vector<ExtractionSet>>& by_paper,
                                       FormatSet selected) {
  std::vector<ExtractionSet> out;
  out.reserve(by_paper.size());
  for (const auto& [id, sets] : by_paper) out.push_back(combine(sets, selected));
  return out;
}

}  // namespace urlx
