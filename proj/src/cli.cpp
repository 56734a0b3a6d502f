#include "urlx/cli.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "urlx/canon.hpp"
#include "urlx/ensemble.hpp"
#include "urlx/evalkit.hpp"
#include "urlx/fixtures.hpp"
#include "urlx/io.hpp"
#include "urlx/oads.hpp"
#include "urlx/trends.hpp"

namespace urlx::cli {

namespace {

std::shared_ptr<spdlog::logger> log() {
  static auto logger = [] {
    auto l = spdlog::stderr_logger_mt("urlx");
    l->set_pattern("urlx: %l: %v");
    return l;
  }();
  return logger;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    log()->error("{}", e.what());
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    log()->error("{}", e.what());
    return kInputError;
  }
}

std::vector<DocumentExtraction> extract_all(const Manifest& manifest, const ExtractOptions& opt) {
  std::vector<DocumentExtraction> results(manifest.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < manifest.size(); i = next++)
      results[i] = extract_document(manifest.records[i], opt.formats, opt.wrap_repair);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(manifest.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return results;
}

std::vector<ExtractionSet> load_sets(const std::filesystem::path& p) {
  return parse_extraction_sets(read_file(p), p.string());
}

}  // namespace

int cmd_extract(const ExtractOptions& opt) {
  return guarded([&] {
    const auto manifest = load_manifest(opt.manifest);
    auto results = extract_all(manifest, opt);

    std::size_t failed_docs = 0;
    std::vector<UrlCandidate> candidates;
    std::vector<ExtractionSet> sets;
    for (const auto& doc : results) {
      for (const auto& w : doc.warnings)
        log()->warn("{}: {} (offset {}): {}", doc.paper_id.value(), w.file.string(), w.byte_offset, w.message);
      for (const auto& [format, why] : doc.failures)
        log()->warn("{}: {} extraction failed: {}", doc.paper_id.value(), format_token(format), why);
      if (!doc.attempted.empty() && doc.failures.size() == doc.attempted.size()) ++failed_docs;

      for (const auto format : doc.attempted.members()) {
        if (doc.failures.contains(format)) continue;
        std::vector<UrlCandidate> mine;
        for (const auto& c : doc.candidates)
          if (c.format == format) mine.push_back(c);
        sets.push_back(build_format_set(mine, format, doc.paper_id));
      }
      candidates.insert(candidates.end(), doc.candidates.begin(), doc.candidates.end());
    }
    sort_candidates(candidates);
    write_file(opt.out_dir / "candidates.tsv", format_candidates(candidates));
    write_file(opt.out_dir / "canonical_sets.tsv", format_extraction_sets(sets));
    log()->info("{} documents, {} candidates, {} failed", manifest.size(), candidates.size(), failed_docs);
    if (!manifest.empty() && failed_docs == manifest.size()) return kAllFailed;
    return kOk;
  });
}

int cmd_eval(const EvalOptions& opt) {
  return guarded([&] {
    const auto sets = load_sets(opt.sets);
    const auto gt = load_ground_truth(opt.ground_truth);
    if (gt.valid_count() == 0) throw Error("ground truth has no valid entries");
    std::vector<FormatSet> combos;
    if (opt.all_combinations) {
      combos = enumerate_combinations();
    } else {
      if (!opt.formats || opt.formats->empty()) throw Error("--combinations one needs --formats");
      combos.push_back(*opt.formats);
    }
    const auto by_paper = group_by_paper(sets);
    const auto reports = evaluate_combinations(by_paper, gt, combos);
    std::cout << render_report_table(reports);
    if (opt.out) write_file(*opt.out, format_reports(reports));
    if (opt.superset) {
      std::string text = "# paper_id\turl\tvalid\n";
      for (const auto& [key, valid] : build_superset(sets, gt.valid_set()))
        text += fmt::format("{}\t{}\t{}\n", key.first.value(), key.second.value(), valid ? 1 : 0);
      write_file(*opt.superset, text);
    }
    return kOk;
  });
}

int cmd_oads(const OadsOptions& opt) {
  return guarded([&] {
    const auto sets = load_sets(opt.sets);
    const auto gt = load_ground_truth(opt.ground_truth);
    OadsRuleSet rules;
    for (const auto& path : opt.rules) {
      auto more = load_rules(path);
      rules.host_suffixes.insert(rules.host_suffixes.end(), more.host_suffixes.begin(), more.host_suffixes.end());
      rules.path_patterns.insert(rules.path_patterns.end(), more.path_patterns.begin(), more.path_patterns.end());
      for (auto& [k, v] : more.overrides) rules.overrides.insert_or_assign(k, v);
    }

    std::string labeled = "# paper_id\tformats\turl\toads\tprovenance\tground_truth_oads\n";
    std::size_t agree = 0, labeled_valid = 0;
    for (const auto& s : sets) {
      for (const auto& u : s.urls) {
        const auto d = classify(u, s.paper_id, rules);
        const auto* e = gt.find(s.paper_id, u);
        std::string truth = "-";
        if (e && e->valid) {
          truth = e->oads ? "1" : "0";
          ++labeled_valid;
          agree += (e->oads == d.oads) ? 1 : 0;
        }
        labeled += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", s.paper_id.value(), s.formats.tokens(), u.value(),
                               d.oads ? 1 : 0, provenance_token(d.provenance), truth);
      }
    }
    if (opt.out) write_file(*opt.out, labeled);

    const auto by_paper = group_by_paper(sets);
    auto valid = valid_by_format(by_paper, gt);
    std::cout << render_oads_table(oads_summary(valid, gt), gt);
    std::cout << fmt::format("rules agree with ground truth on {} of {} valid extracted labels\n", agree,
                             labeled_valid);
    return kOk;
  });
}

int cmd_trend(const TrendOptions& opt) {
  return guarded([&] {
    const auto manifest = load_manifest(opt.manifest);
    UrlCounts counts;
    if (opt.counts) {
      counts = parse_url_counts(read_file(*opt.counts), opt.counts->string());
    } else if (opt.candidates) {
      const auto cands = parse_candidates(read_file(*opt.candidates), opt.candidates->string());
      std::map<PaperId, std::vector<UrlCandidate>> by_paper;
      for (const auto& c : cands)
        if (opt.formats.contains(c.format)) by_paper[c.paper_id].push_back(c);
      for (const auto& r : manifest.records) {
        bool has_file = false;
        for (const auto f : opt.formats.members()) has_file = has_file || r.has(f);
        if (!has_file) continue;
        std::set<CanonicalUrl> urls;
        if (const auto it = by_paper.find(r.paper_id); it != by_paper.end())
          for (const auto f : opt.formats.members()) {
            std::vector<UrlCandidate> mine;
            for (const auto& c : it->second)
              if (c.format == f) mine.push_back(c);
            const auto s = build_format_set(mine, f, r.paper_id);
            urls.insert(s.urls.begin(), s.urls.end());
          }
        counts[r.paper_id] = static_cast<std::uint32_t>(urls.size());
      }
    } else {
      throw Error("trend needs --candidates or --counts");
    }
    const auto stats = bootstrap_counts(manifest, counts, opt.draws, opt.n, opt.seed);
    const auto rates = presence_rate(manifest, counts, opt.n, opt.seed);
    emit_trend_csv(stats, rates, opt.out_dir / "trend_boxplot.csv", opt.out_dir / "trend_rates.csv");
    if (opt.chart) write_file(opt.out_dir / "trend.svg", render_trend_svg(stats, rates));
    log()->info("{} years, {} draws of {} papers", rates.size(), opt.draws, opt.n);
    return kOk;
  });
}

int cmd_sample(const SampleOptions& opt) {
  return guarded([&] {
    const auto manifest = load_manifest(opt.manifest);
    const auto sample = stratified_sample(manifest, opt.per_stratum, opt.seed);
    write_file(opt.out, format_manifest(sample));
    log()->info("sampled {} of {} papers", sample.size(), manifest.size());
    return kOk;
  });
}

int cmd_fixture(const FixtureOptions& opt) {
  return guarded([&] {
    if (opt.kind == "pilot") {
      fixtures::write_pilot_fixture(fixtures::pilot_counts_fixture(), opt.out_dir);
      return kOk;
    }
    if (opt.kind != "planted") throw Error("fixture kind must be 'pilot' or 'planted'");
    Stream rng(opt.seed, "planted/urls");
    const auto urls = fixtures::random_canonical_urls(opt.count, rng);
    const auto corpus = fixtures::generate_planted_corpus(
        urls, FormatSet{FormatKind::Text, FormatKind::Latex, FormatKind::Html, FormatKind::TeiXml}, opt.seed,
        {.force_text_line_break = opt.force_break});
    std::string files;
    for (const auto& d : corpus.documents) {
      write_file(opt.out_dir / d.filename, d.content);
      if (!files.empty()) files.push_back(';');
      files += fmt::format("{}={}", format_token(d.format), d.filename);
    }
    write_file(opt.out_dir / "manifest.tsv", "# synthetic planted-URL paper\n2401.00001\t2024\t1\t" + files + "\n");
    std::string oracle;
    for (const auto& u : corpus.oracle) oracle += u + "\n";
    write_file(opt.out_dir / "oracle.txt", oracle);
    return kOk;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"URL extraction, ensemble evaluation and trend sampling for scholarly papers"};
  app.require_subcommand(1);

  std::string formats_text;
  std::string wrap_text = "conservative";
  std::string combos_text = "all";
  int code = kOk;

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Extract URL candidates and canonical sets");
  extract->add_option("--manifest", ex.manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", ex.out_dir, "Output directory")->required();
  extract->add_option("--formats", formats_text, "Formats to run, e.g. html,teixml");
  extract->add_option("--wrap-repair", wrap_text, "Text wrap repair: none|conservative")
      ->check(CLI::IsMember({"none", "conservative"}));
  extract->add_option("--jobs", ex.jobs, "Parallel documents")->check(CLI::PositiveNumber);

  EvalOptions ev;
  std::string ev_out, ev_superset;
  auto* eval = app.add_subcommand("eval", "Precision/recall/F1 per format combination");
  eval->add_option("--sets", ev.sets, "Canonical sets file")->required()->check(CLI::ExistingFile);
  eval->add_option("--ground-truth", ev.ground_truth, "Ground-truth file")->required()->check(CLI::ExistingFile);
  eval->add_option("--combinations", combos_text, "one|all")->check(CLI::IsMember({"one", "all"}));
  eval->add_option("--formats", formats_text, "Combination for --combinations one, e.g. latex+html+teixml");
  eval->add_option("--out", ev_out, "Report records file");
  eval->add_option("--superset", ev_superset, "Write the labeled evaluation superset here");

  OadsOptions oa;
  std::string oa_out;
  auto* oads = app.add_subcommand("oads", "Label OADS URLs and summarize per format");
  oads->add_option("--sets", oa.sets, "Canonical sets file")->required()->check(CLI::ExistingFile);
  oads->add_option("--ground-truth", oa.ground_truth, "Ground-truth file")->required()->check(CLI::ExistingFile);
  oads->add_option("--rules", oa.rules, "Rule file (repeatable)")->required()->check(CLI::ExistingFile);
  oads->add_option("--out", oa_out, "Labeled URL output file");

  TrendOptions tr;
  std::string tr_candidates, tr_counts;
  auto* trend = app.add_subcommand("trend", "Per-year bootstrap URL counts and presence rates");
  trend->add_option("--manifest", tr.manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  trend->add_option("--candidates", tr_candidates, "Candidates file from extract");
  trend->add_option("--counts", tr_counts, "paper_id<TAB>count file");
  trend->add_option("--formats", formats_text, "Formats counted from candidates (default text)");
  trend->add_option("--draws", tr.draws, "Bootstrap draws per year")->check(CLI::PositiveNumber);
  trend->add_option("--n", tr.n, "Papers per draw")->check(CLI::PositiveNumber);
  trend->add_option("--seed", tr.seed, "Random seed");
  trend->add_option("--out", tr.out_dir, "Output directory")->required();
  trend->add_flag("--chart", tr.chart, "Also write trend.svg");

  SampleOptions sa;
  auto* sample = app.add_subcommand("sample", "Stratified sample per (year, month)");
  sample->add_option("--manifest", sa.manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  sample->add_option("--out", sa.out, "Output manifest")->required();
  sample->add_option("--per-stratum", sa.per_stratum, "Papers per stratum")->check(CLI::PositiveNumber);
  sample->add_option("--seed", sa.seed, "Random seed");

  FixtureOptions fx;
  auto* fixture = app.add_subcommand("fixture", "Write test fixtures (pilot | planted)");
  fixture->add_option("kind", fx.kind, "pilot or planted")->required()->check(CLI::IsMember({"pilot", "planted"}));
  fixture->add_option("--out", fx.out_dir, "Output directory")->required();
  fixture->add_option("--count", fx.count, "Planted URL count");
  fixture->add_option("--seed", fx.seed, "Random seed");
  fixture->add_flag("--force-break", fx.force_break, "Break one Text URL across lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  const auto parse_formats = [&](FormatSet fallback) -> std::optional<FormatSet> {
    if (formats_text.empty()) return fallback;
    auto f = FormatSet::parse(formats_text);
    if (!f || f->empty()) {
      log()->error("bad --formats '{}'", formats_text);
      return std::nullopt;
    }
    return f;
  };

  if (extract->parsed()) {
    const auto f = parse_formats(ex.formats);
    if (!f) return kInputError;
    ex.formats = *f;
    ex.wrap_repair = *parse_wrap_repair(wrap_text);
    code = cmd_extract(ex);
  } else if (eval->parsed()) {
    ev.all_combinations = combos_text == "all";
    if (!formats_text.empty()) {
      ev.formats = FormatSet::parse(formats_text);
      if (!ev.formats || ev.formats->empty()) {
        log()->error("bad --formats '{}'", formats_text);
        return kInputError;
      }
    }
    if (!ev_out.empty()) ev.out = ev_out;
    if (!ev_superset.empty()) ev.superset = ev_superset;
    code = cmd_eval(ev);
  } else if (oads->parsed()) {
    if (!oa_out.empty()) oa.out = oa_out;
    code = cmd_oads(oa);
  } else if (trend->parsed()) {
    const auto f = parse_formats(tr.formats);
    if (!f) return kInputError;
    tr.formats = *f;
    if (!tr_candidates.empty()) tr.candidates = tr_candidates;
    if (!tr_counts.empty()) tr.counts = tr_counts;
    code = cmd_trend(tr);
  } else if (sample->parsed()) {
    code = cmd_sample(sa);
  } else if (fixture->parsed()) {
    code = cmd_fixture(fx);
  }
  return code;
}

}  // namespace urlx::cli
