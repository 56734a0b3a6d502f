#include "urlx/evalkit.hpp"

#include <fmt/format.h>

#include "urlx/io.hpp"

namespace urlx {

GroundTruth::GroundTruth(std::vector<GroundTruthEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    PaperUrl key{e.paper_id, e.url};
    if (e.oads && !e.valid)
      throw Error(fmt::format("ground truth: {} {} is OADS but not valid", e.paper_id.value(), e.url.value()));
    if (!index_.emplace(key, i).second)
      throw Error(fmt::format("ground truth: duplicate entry {} {}", e.paper_id.value(), e.url.value()));
    if (e.valid) valid_.insert(std::move(key));
  }
}

const GroundTruthEntry* GroundTruth::find(const PaperId& id, const CanonicalUrl& url) const {
  const auto it = index_.find(PaperUrl{id, url});
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t GroundTruth::oads_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.oads ? 1 : 0;
  return n;
}

GroundTruth parse_ground_truth(std::string_view text, const std::string& source_name) {
  std::vector<GroundTruthEntry> entries;
  std::map<PaperUrl, std::size_t> first_line;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() != 4) fail(fmt::format("expected 4 fields, got {}", cols.size()));
    const auto id = PaperId::parse(trim(cols[0]));
    if (!id) fail(fmt::format("bad paper id '{}'", cols[0]));
    const auto url = canonicalize(trim(cols[1]));
    if (!url) fail(fmt::format("not a URL: '{}'", cols[1]));
    const auto flag = [&](std::string_view v, const char* what) {
      v = trim(v);
      if (v != "0" && v != "1") fail(fmt::format("{} must be 0 or 1, got '{}'", what, v));
      return v == "1";
    };
    const bool valid = flag(cols[2], "valid");
    const bool oads = flag(cols[3], "oads");
    if (oads && !valid) fail("oads=1 requires valid=1");
    if (const auto [it, fresh] = first_line.emplace(PaperUrl{*id, *url}, line_no); !fresh)
      fail(fmt::format("duplicate of line {} after canonicalization", it->second));
    entries.push_back({*id, *url, valid, oads});
  });
  return GroundTruth(std::move(entries));
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(read_file(path), path.string());
}

std::string format_ground_truth(const GroundTruth& gt) {
  std::string out = "# paper_id\turl\tvalid\toads\n";
  for (const auto& e : gt.entries())
    out += fmt::format("{}\t{}\t{}\t{}\n", e.paper_id.value(), e.url.value(), e.valid ? 1 : 0, e.oads ? 1 : 0);
  return out;
}

std::map<PaperUrl, bool> build_superset(std::span<const ExtractionSet> all_sets,
                                        const std::set<PaperUrl>& gt_valid) {
  std::map<PaperUrl, bool> out;
  for (const auto& s : all_sets)
    for (const auto& u : s.urls) {
      PaperUrl key{s.paper_id, u};
      const bool valid = gt_valid.contains(key);
      out.emplace(std::move(key), valid);
    }
  for (const auto& v : gt_valid) out.insert_or_assign(v, true);
  return out;
}

EvalReport evaluate(std::span<const ExtractionSet> combined, const GroundTruth& gt) {
  if (gt.valid_count() == 0) throw Error("ground truth has no valid entries; recall is undefined");
  EvalReport r;
  r.ground_truth_valid = gt.valid_count();
  std::set<PaperId> seen;
  for (const auto& s : combined) {
    if (!seen.insert(s.paper_id).second)
      throw Error(fmt::format("evaluate: paper {} appears twice", s.paper_id.value()));
    if (r.combination.empty()) r.combination = s.formats;
    r.total_extracted += s.urls.size();
    for (const auto& u : s.urls)
      if (gt.valid_set().contains(PaperUrl{s.paper_id, u})) ++r.valid_count;
  }
  r.degenerate = r.total_extracted == 0;
  r.precision = r.degenerate ? 0.0 : static_cast<double>(r.valid_count) / static_cast<double>(r.total_extracted);
  r.recall = static_cast<double>(r.valid_count) / static_cast<double>(r.ground_truth_valid);
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

std::vector<EvalReport> evaluate_combinations(const std::map<PaperId, std::vector<ExtractionSet>>& by_paper,
                                              const GroundTruth& gt, std::span<const FormatSet> combinations) {
  std::vector<EvalReport> out;
  out.reserve(combinations.size());
  for (const auto combo : combinations) {
    auto report = evaluate(combine_all(by_paper, combo), gt);
    report.combination = combo;
    out.push_back(report);
  }
  return out;
}

std::map<FormatKind, std::set<PaperUrl>> valid_by_format(
    const std::map<PaperId, std::vector<ExtractionSet>>& by_paper, const GroundTruth& gt) {
  std::map<FormatKind, std::set<PaperUrl>> out;
  for (auto f : kAllFormats) out[f];
  for (const auto& [id, sets] : by_paper)
    for (const auto& s : sets)
      for (const auto f : s.formats.members())
        for (const auto& u : s.urls) {
          PaperUrl key{id, u};
          if (gt.valid_set().contains(key)) out[f].insert(std::move(key));
        }
  return out;
}

std::map<FormatSet, std::size_t> overlap(const std::map<FormatKind, std::set<PaperUrl>>& per_format) {
  if (per_format.size() < 2 || per_format.size() > 4)
    throw Error(fmt::format("overlap needs 2 to 4 formats, got {}", per_format.size()));
  FormatSet supplied;
  for (const auto& [f, _] : per_format) supplied.insert(f);

  std::map<FormatSet, std::size_t> regions;
  for (std::uint8_t bits = 1; bits < 16; ++bits) {
    const auto s = FormatSet::from_bits(bits);
    if (s.is_subset_of(supplied)) regions[s] = 0;
  }
  std::map<PaperUrl, FormatSet> membership;
  for (const auto& [f, items] : per_format)
    for (const auto& item : items) membership[item].insert(f);
  for (const auto& [item, m] : membership) ++regions[m];
  return regions;
}

std::string format_reports(std::span<const EvalReport> reports) {
  std::string out = "# formats\tvalid\ttotal_extracted\tground_truth_valid\tprecision\trecall\tf1\tdegenerate\n";
  for (const auto& r : reports)
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.combination.tokens('+'), r.valid_count,
                       r.total_extracted, r.ground_truth_valid, r.precision, r.recall, r.f1,
                       r.degenerate ? 1 : 0);
  return out;
}

std::string render_report_table(std::span<const EvalReport> reports) {
  std::size_t width = 6;
  for (const auto& r : reports) width = std::max(width, r.combination.label().size());
  std::string out = fmt::format("{:<{}}  {:>7}  {:>5}  {:>5}  {:>5}\n", "Format", width, "V. URLs", "P", "R", "F1");
  out += std::string(width + 30, '-') + "\n";
  for (const auto& r : reports) {
    out += fmt::format("{:<{}}  {:>7}  {:>5.2f}  {:>5.2f}  {:>5.2f}{}\n", r.combination.label(), width,
                       r.valid_count, r.precision, r.recall, r.f1, r.degenerate ? "  (nothing extracted)" : "");
  }
  return out;
}

}  // namespace urlx
