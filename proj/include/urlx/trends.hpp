#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "urlx/corpus.hpp"

namespace urlx {

/// One bootstrap draw for one year.
struct YearSampleStats {
  int year = 0;
  std::size_t draw_index = 0;
  std::vector<std::uint32_t> urls_per_paper;
  std::uint64_t total_urls = 0;
  std::size_t papers_with_url = 0;
};

using UrlCounts = std::map<PaperId, std::uint32_t>;

/// `draws` samples of exactly `n` papers per year, drawn uniformly WITH
/// replacement from that year's population. Years without papers are
/// omitted. Output is sorted by (year, draw_index). Throws if a drawn paper
/// has no entry in url_counts.
std::vector<YearSampleStats> bootstrap_counts(const Manifest& manifest, const UrlCounts& url_counts,
                                              std::size_t draws, std::size_t n, std::uint64_t seed);

/// Fraction of papers with at least one URL in a single sample of
/// min(n, population) papers per year, drawn WITHOUT replacement.
std::map<int, double> presence_rate(const Manifest& manifest, const UrlCounts& url_counts, std::size_t n,
                                    std::uint64_t seed);

struct TrendFiles {
  std::string boxplot_csv;
  std::string rates_csv;
};

/// Boxplot file: year,draw_index,sample_size,total_urls,papers_with_url,urls_per_paper
/// where urls_per_paper joins the per-paper counts with ';' in sample order.
/// Rates file: year,rate with rate rounded to 4 decimals. Both sorted by year.
TrendFiles format_trend_csv(std::span<const YearSampleStats> stats, const std::map<int, double>& rates);
void emit_trend_csv(std::span<const YearSampleStats> stats, const std::map<int, double>& rates,
                    const std::filesystem::path& boxplot_path, const std::filesystem::path& rates_path);

/// Static SVG: per-year box plot of total URLs across draws, with the
/// presence-rate series drawn as an inset line chart.
std::string render_trend_svg(std::span<const YearSampleStats> stats, const std::map<int, double>& rates);

/// Rows: paper_id TAB count.
UrlCounts parse_url_counts(std::string_view text, const std::string& source_name = "<counts>");

}  // namespace urlx
