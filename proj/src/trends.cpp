#include "urlx/trends.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "urlx/error.hpp"
#include "urlx/io.hpp"
#include "urlx/random.hpp"

namespace urlx {

namespace {

std::uint32_t count_for(const UrlCounts& counts, const PaperId& id) {
  const auto it = counts.find(id);
  if (it == counts.end()) throw Error(fmt::format("no URL count for paper {}", id.value()));
  return it->second;
}

}  // namespace

std::vector<YearSampleStats> bootstrap_counts(const Manifest& manifest, const UrlCounts& url_counts,
                                              std::size_t draws, std::size_t n, std::uint64_t seed) {
  if (draws == 0 || n == 0) throw Error("draws and n must be >= 1");
  std::vector<YearSampleStats> out;
  for (const auto& [year, pop] : population_by_year(manifest)) {
    for (std::size_t d = 0; d < draws; ++d) {
      Stream rng(seed, fmt::format("boot/{:04d}/{}", year, d));
      YearSampleStats s{year, d, {}, 0, 0};
      s.urls_per_paper.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        const auto* rec = pop[static_cast<std::size_t>(rng.below(pop.size()))];
        const auto c = count_for(url_counts, rec->paper_id);
        s.urls_per_paper.push_back(c);
        s.total_urls += c;
        if (c > 0) ++s.papers_with_url;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::map<int, double> presence_rate(const Manifest& manifest, const UrlCounts& url_counts, std::size_t n,
                                    std::uint64_t seed) {
  std::map<int, double> out;
  for (const auto& [year, sample] : sample_per_year(manifest, n, seed)) {
    std::size_t with = 0;
    for (const auto& r : sample.records)
      if (count_for(url_counts, r.paper_id) > 0) ++with;
    out[year] = static_cast<double>(with) / static_cast<double>(sample.size());
  }
  return out;
}

TrendFiles format_trend_csv(std::span<const YearSampleStats> stats, const std::map<int, double>& rates) {
  std::vector<const YearSampleStats*> order;
  for (const auto& s : stats) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::pair(a->year, a->draw_index) < std::pair(b->year, b->draw_index);
  });
  TrendFiles files;
  files.boxplot_csv = "year,draw_index,sample_size,total_urls,papers_with_url,urls_per_paper\n";
  for (const auto* s : order) {
    files.boxplot_csv += fmt::format("{},{},{},{},{},{}\n", s->year, s->draw_index, s->urls_per_paper.size(),
                                     s->total_urls, s->papers_with_url, fmt::join(s->urls_per_paper, ";"));
  }
  files.rates_csv = "year,rate\n";
  for (const auto& [year, rate] : rates) files.rates_csv += fmt::format("{},{:.4f}\n", year, rate);
  return files;
}

void emit_trend_csv(std::span<const YearSampleStats> stats, const std::map<int, double>& rates,
                    const std::filesystem::path& boxplot_path, const std::filesystem::path& rates_path) {
  const auto files = format_trend_csv(stats, rates);
  write_file(boxplot_path, files.boxplot_csv);
  write_file(rates_path, files.rates_csv);
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string render_trend_svg(std::span<const YearSampleStats> stats, const std::map<int, double>& rates) {
  std::map<int, std::vector<double>> totals;
  for (const auto& s : stats) totals[s.year].push_back(static_cast<double>(s.total_urls));
  for (auto& [y, v] : totals) std::sort(v.begin(), v.end());

  constexpr double W = 960, H = 540, left = 70, right = 20, top = 20, bottom = 50;
  const double plot_w = W - left - right, plot_h = H - top - bottom;
  double ymax = 1.0;
  for (const auto& [y, v] : totals)
    if (!v.empty()) ymax = std::max(ymax, v.back());
  ymax *= 1.05;
  const std::size_t nyears = std::max<std::size_t>(totals.size(), 1);
  const double slot = plot_w / static_cast<double>(nyears);
  const auto ypix = [&](double v) { return top + plot_h * (1.0 - v / ymax); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H, W, H);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top, top + plot_h);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, top + plot_h,
                     left + plot_w);
  for (int t = 0; t <= 5; ++t) {
    const double v = ymax * t / 5.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.0f}</text>\n", left - 6, ypix(v) + 4, v);
  }
  svg += fmt::format("<text x=\"16\" y=\"{:.1f}\" transform=\"rotate(-90 16 {:.1f})\" text-anchor=\"middle\">"
                     "URLs per sample</text>\n",
                     top + plot_h / 2, top + plot_h / 2);

  std::size_t i = 0;
  for (const auto& [year, v] : totals) {
    const double cx = left + slot * (static_cast<double>(i) + 0.5);
    const double bw = std::max(2.0, slot * 0.6);
    const double q0 = quantile(v, 0), q1 = quantile(v, 0.25), q2 = quantile(v, 0.5), q3 = quantile(v, 0.75),
                 q4 = quantile(v, 1);
    svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#444\"/>\n", cx,
                       ypix(q0), ypix(q4));
    svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#9ecae1\" "
                       "stroke=\"#08519c\"/>\n",
                       cx - bw / 2, ypix(q3), bw, std::max(0.5, ypix(q1) - ypix(q3)));
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#08519c\" "
                       "stroke-width=\"2\"/>\n",
                       cx - bw / 2, ypix(q2), cx + bw / 2, ypix(q2));
    if (nyears <= 40 || i % 2 == 0)
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" transform=\"rotate(-60 {:.1f} "
                         "{:.1f})\">{}</text>\n",
                         cx, top + plot_h + 14, cx, top + plot_h + 14, year);
    ++i;
  }

  if (!rates.empty()) {
    constexpr double iw = 260, ih = 130;
    const double ix = left + 20, iy = top + 10;
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"#888\"/>\n", ix,
                       iy, iw, ih);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">papers with >= 1 URL (%)</text>\n", ix + 6, iy + 14);
    const int y0 = rates.begin()->first, y1 = rates.rbegin()->first;
    const double span = std::max(1, y1 - y0);
    std::string points;
    for (const auto& [year, rate] : rates) {
      const double px = ix + 10 + (iw - 20) * (year - y0) / span;
      const double py = iy + ih - 10 - (ih - 30) * rate;
      points += fmt::format("{:.1f},{:.1f} ", px, py);
    }
    svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n", points);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                       ix + 10, iy + ih - 1, y0, ix + iw - 10, iy + ih - 1, y1);
  }
  svg += "</svg>\n";
  return svg;
}

UrlCounts parse_url_counts(std::string_view text, const std::string& source_name) {
  UrlCounts out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() != 2) fail(fmt::format("expected 2 fields, got {}", cols.size()));
    const auto id = PaperId::parse(trim(cols[0]));
    if (!id) fail(fmt::format("bad paper id '{}'", cols[0]));
    const auto v = trim(cols[1]);
    std::uint32_t count = 0;
    if (auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), count); ec != std::errc{} || p != v.data() + v.size())
      fail(fmt::format("bad count '{}'", cols[1]));
    if (!out.emplace(*id, count).second) fail(fmt::format("duplicate paper id {}", id->value()));
  });
  return out;
}

}  // namespace urlx
