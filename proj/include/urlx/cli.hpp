#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "urlx/corpus.hpp"
#include "urlx/extract.hpp"

namespace urlx::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kAllFailed = 2;

struct ExtractOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  FormatSet formats{FormatKind::Text, FormatKind::Latex, FormatKind::Html, FormatKind::TeiXml};
  WrapRepair wrap_repair = WrapRepair::Conservative;
  unsigned jobs = 1;
};
/// Writes <out>/candidates.tsv and <out>/canonical_sets.tsv.
int cmd_extract(const ExtractOptions& opt);

struct EvalOptions {
  std::filesystem::path sets;
  std::filesystem::path ground_truth;
  bool all_combinations = true;
  std::optional<FormatSet> formats;          // required when !all_combinations
  std::optional<std::filesystem::path> out;  // report records
  std::optional<std::filesystem::path> superset;
};
/// Prints the report table on stdout.
int cmd_eval(const EvalOptions& opt);

struct OadsOptions {
  std::filesystem::path sets;
  std::filesystem::path ground_truth;
  std::vector<std::filesystem::path> rules;  // merged in order
  std::optional<std::filesystem::path> out;
};
int cmd_oads(const OadsOptions& opt);

struct TrendOptions {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> candidates;
  std::optional<std::filesystem::path> counts;
  FormatSet formats{FormatKind::Text};
  std::size_t draws = 10;
  std::size_t n = 1000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir;
  bool chart = false;
};
/// Writes <out>/trend_boxplot.csv, <out>/trend_rates.csv (+ trend.svg).
int cmd_trend(const TrendOptions& opt);

struct SampleOptions {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::size_t per_stratum = 3;
  std::uint64_t seed = 42;
};
int cmd_sample(const SampleOptions& opt);

struct FixtureOptions {
  std::string kind;  // "pilot" or "planted"
  std::filesystem::path out_dir;
  std::size_t count = 10;
  std::uint64_t seed = 42;
  bool force_break = false;
};
int cmd_fixture(const FixtureOptions& opt);

/// Full command line front end.
int run(int argc, char** argv);

}  // namespace urlx::cli
