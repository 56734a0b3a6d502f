#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "urlx/canon.hpp"
#include "urlx/evalkit.hpp"
#include "urlx/random.hpp"

namespace urlx::fixtures {

struct PlantedDocument {
  FormatKind format;
  std::string filename;
  std::string content;
};

struct PlantedOptions {
  /// Break one URL of the Text document across a line; only wrap repair
  /// in conservative mode recovers it.
  bool force_text_line_break = false;
};

struct PlantedCorpus {
  std::vector<PlantedDocument> documents;  // LaTeX yields a .tex and a .bbl
  std::vector<std::string> oracle;         // the planted URLs, in input order
};

/// Embeds every URL into a URL-free scaffold for each requested format,
/// using that format's idiom: bare token, \url/\href, <a href>, target=.
/// Scaffolds also carry decoys the extractors must ignore (comments,
/// fragments, mailto, non-anchor tags). Throws if a URL contains whitespace.
PlantedCorpus generate_planted_corpus(std::span<const std::string> urls, FormatSet formats, std::uint64_t seed,
                                      PlantedOptions options = {});

/// `count` distinct random URLs that are already canonical and are not
/// arXiv self-references. Covers the full token alphabet, including
/// balanced parentheses, query strings, fragments and percent escapes.
std::vector<std::string> random_canonical_urls(std::size_t count, Stream& rng);

/// Synthetic stand-in for the 10-paper pilot dataset.
struct PilotFixture {
  std::vector<ExtractionSet> sets;  // single-format, per paper
  GroundTruth ground_truth;         // 87 valid (41 OADS) plus 75 invalid extractions
  std::string overrides_rules;      // [overrides] for the off-list OADS links
};

/// Membership counts behind the fixture. One row per Venn region.
struct PilotRegion {
  FormatSet formats;  // empty = valid but missed by every format
  int valid;
  int oads;
  int invalid;
};
std::span<const PilotRegion> pilot_regions();

PilotFixture pilot_counts_fixture();

/// Writes canonical_sets.tsv, ground_truth.tsv and overrides.rules.
void write_pilot_fixture(const PilotFixture& fixture, const std::filesystem::path& dir);

}  // namespace urlx::fixtures
