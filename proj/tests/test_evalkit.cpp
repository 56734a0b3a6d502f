#include <doctest.h>

#include <cmath>

#include "urlx/error.hpp"
#include "urlx/evalkit.hpp"
#include "urlx/random.hpp"

using namespace urlx;

namespace {

const PaperId kP = PaperId::from("2401.00001");
const PaperId kQ = PaperId::from("2401.00002");

CanonicalUrl url(std::string_view raw) { return *canonicalize(raw); }

GroundTruth truth(std::initializer_list<std::pair<std::string_view, bool>> rows, PaperId id = kP) {
  std::vector<GroundTruthEntry> es;
  for (auto [u, v] : rows) es.push_back({id, url(u), v, false});
  return GroundTruth(std::move(es));
}

// Report with the given counts, built from synthetic URLs against |gt|=gt_valid.
EvalReport counts_report(std::size_t valid, std::size_t total, std::size_t gt_valid) {
  std::vector<GroundTruthEntry> es;
  for (std::size_t i = 0; i < gt_valid; ++i) es.push_back({kP, url("https://v.org/" + std::to_string(i)), true, false});
  ExtractionSet s{kP, {FormatKind::Text}, {}};
  for (std::size_t i = 0; i < valid; ++i) s.urls.insert(url("https://v.org/" + std::to_string(i)));
  for (std::size_t i = valid; i < total; ++i) s.urls.insert(url("https://bad.org/" + std::to_string(i)));
  const std::vector sets{s};
  return evaluate(sets, GroundTruth(std::move(es)));
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

TEST_CASE("ground truth records") {
  const auto gt = parse_ground_truth(
      "# paper_id\turl\tvalid\toads\n2401.00001\tHTTPS://A.org/x.\t1\t1\n2401.00001\thttps://b.org\t0\t0\n");
  CHECK(gt.valid_count() == 1);
  CHECK(gt.oads_count() == 1);
  CHECK(gt.find(kP, url("https://a.org/x")));
  CHECK(parse_ground_truth(format_ground_truth(gt)).entries().size() == 2);
  CHECK_THROWS_AS(parse_ground_truth("2401.00001\thttps://a.org\t0\t1\n"), Error);
  CHECK_THROWS_AS(parse_ground_truth("2401.00001\thttps://a.org\t1\t0\n2401.00001\thttps://a.org\t1\t0\n"), Error);
  CHECK_THROWS_AS(parse_ground_truth("2401.00001\thttps://a.org\t2\t0\n"), ParseError);
  CHECK_THROWS_AS(parse_ground_truth("2401.00001\tnot a url\t1\t0\n"), ParseError);
}

TEST_CASE("superset") {
  const std::vector sets{ExtractionSet{kP, {FormatKind::Text}, {url("https://a.org"), url("https://b.org")}}};
  const std::set<PaperUrl> gt{{kP, url("https://b.org")}, {kP, url("https://c.org")}};
  const auto s = build_superset(sets, gt);
  CHECK(s == std::map<PaperUrl, bool>{{{kP, url("https://a.org")}, false},
                                      {{kP, url("https://b.org")}, true},
                                      {{kP, url("https://c.org")}, true}});
  const auto only = build_superset({}, {{kP, url("https://c.org")}});
  CHECK(only.size() == 1);
  CHECK(only.begin()->second);
}

TEST_CASE("evaluate") {
  SUBCASE("perfect precision") {
    const auto r = counts_report(39, 39, 87);
    CHECK(r.precision == 1.0);
    CHECK(round2(r.recall) == doctest::Approx(0.45));
    CHECK(round2(r.f1) == doctest::Approx(0.62));
  }
  SUBCASE("empty extraction") {
    const auto r = counts_report(0, 0, 87);
    CHECK(r.degenerate);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
  }
  SUBCASE("recall") { CHECK(round2(counts_report(73, 118, 87).recall) == doctest::Approx(0.84)); }
  SUBCASE("micro average") {
    const auto gt = GroundTruth({{kP, url("https://a.org"), true, false},
                                 {kQ, url("https://a.org"), true, false},
                                 {kQ, url("https://b.org"), true, false}});
    const std::vector sets{ExtractionSet{kP, {FormatKind::Text}, {url("https://a.org"), url("https://x.org")}},
                           ExtractionSet{kQ, {FormatKind::Text}, {url("https://b.org")}}};
    const auto r = evaluate(sets, gt);
    CHECK(r.valid_count == 2);
    CHECK(r.total_extracted == 3);
    CHECK(r.ground_truth_valid == 3);
    CHECK(r.precision == doctest::Approx(2.0 / 3));
  }
  SUBCASE("errors") {
    const std::vector sets{ExtractionSet{kP, {FormatKind::Text}, {url("https://a.org")}}};
    CHECK_THROWS_AS(evaluate(sets, truth({{"https://a.org", false}})), Error);
    const std::vector twice{sets[0], sets[0]};
    CHECK_THROWS_AS(evaluate(twice, truth({{"https://a.org", true}})), Error);
  }
}

TEST_CASE("evaluate matches a brute-force oracle") {
  Stream rng(5, "evalkit-oracle");
  const std::vector<PaperId> papers{kP, kQ, PaperId::from("hep-th/9702001")};
  for (int round = 0; round < 50; ++round) {
    std::vector<GroundTruthEntry> es;
    std::vector<ExtractionSet> sets;
    for (const auto& p : papers)
      for (int u = 0; u < 12; ++u)
        if (rng.below(2)) es.push_back({p, url("https://u.org/" + std::to_string(u)), rng.below(3) != 0, false});
    bool any_valid = false;
    for (const auto& e : es) any_valid = any_valid || e.valid;
    if (!any_valid) continue;
    for (const auto& p : papers)
      for (auto f : kAllFormats) {
        ExtractionSet s{p, {f}, {}};
        for (int u = 0; u < 14; ++u)
          if (rng.below(3) == 0) s.urls.insert(url("https://u.org/" + std::to_string(u)));
        sets.push_back(s);
      }
    const GroundTruth gt(es);
    const auto combos = enumerate_combinations();
    const auto reports = evaluate_combinations(group_by_paper(sets), gt, combos);
    REQUIRE(reports.size() == 15);
    for (std::size_t k = 0; k < combos.size(); ++k) {
      std::set<PaperUrl> extracted;
      for (const auto& s : sets)
        if (s.formats.is_subset_of(combos[k]))
          for (const auto& u : s.urls) extracted.insert({s.paper_id, u});
      std::size_t hit = 0;
      for (const auto& pu : extracted) hit += gt.valid_set().contains(pu) ? 1 : 0;
      CHECK(reports[k].combination == combos[k]);
      CHECK(reports[k].valid_count == hit);
      CHECK(reports[k].total_extracted == extracted.size());
      const double p = extracted.empty() ? 0.0 : double(hit) / extracted.size();
      const double r = double(hit) / gt.valid_count();
      CHECK(reports[k].precision == doctest::Approx(p));
      CHECK(reports[k].recall == doctest::Approx(r));
      CHECK(reports[k].f1 == doctest::Approx(p + r == 0 ? 0.0 : 2 * p * r / (p + r)));
    }
  }
}

TEST_CASE("overlap") {
  const PaperUrl a{kP, url("https://a.org")}, b{kP, url("https://b.org")}, c{kP, url("https://c.org")};
  SUBCASE("full overlap") {
    const auto o = overlap({{FormatKind::Text, {a}}, {FormatKind::Latex, {a}}, {FormatKind::Html, {a}}});
    CHECK(o.size() == 7);
    for (const auto& [k, n] : o) CHECK(n == (k.size() == 3 ? 1u : 0u));
  }
  SUBCASE("disjoint") {
    const auto o = overlap({{FormatKind::Text, {a}}, {FormatKind::Latex, {b}}, {FormatKind::Html, {c}}});
    CHECK(o.at({FormatKind::Text}) == 1);
    CHECK(o.at({FormatKind::Latex}) == 1);
    CHECK(o.at({FormatKind::Html}) == 1);
    CHECK(o.at({FormatKind::Text, FormatKind::Latex}) == 0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(overlap({{FormatKind::Text, {a}}}), Error);
    CHECK_THROWS_AS(overlap({}), Error);
  }
  SUBCASE("brute force") {
    Stream rng(9, "overlap");
    for (int round = 0; round < 40; ++round) {
      std::map<FormatKind, std::set<PaperUrl>> in;
      for (auto f : kAllFormats)
        for (int u = 0; u < 10; ++u)
          if (rng.below(2)) in[f].insert({kP, url("https://u.org/" + std::to_string(u))});
      for (auto f : kAllFormats) in[f];
      const auto o = overlap(in);
      CHECK(o.size() == 15);
      std::size_t total = 0;
      for (const auto& [k, n] : o) total += n;
      std::set<PaperUrl> uni;
      for (const auto& [f, s] : in) uni.insert(s.begin(), s.end());
      CHECK(total == uni.size());
      for (const auto& pu : uni) {
        FormatSet member;
        for (const auto& [f, s] : in)
          if (s.contains(pu)) member.insert(f);
        CHECK(o.at(member) >= 1);
      }
    }
  }
}

TEST_CASE("report rendering") {
  const std::vector reports{counts_report(39, 39, 87)};
  const auto table = render_report_table(reports);
  CHECK(table.find("1.00") != std::string::npos);
  CHECK(table.find("0.45") != std::string::npos);
  CHECK(format_reports(reports).find("text") != std::string::npos);
}
