#include <doctest.h>

#include <set>

#include <fmt/format.h>

#include "urlx/evalkit.hpp"
#include "urlx/fixtures.hpp"
#include "urlx/random.hpp"

using namespace urlx;

namespace {

const PaperId kId = PaperId::from("2401.00001");

std::string random_string(Stream& rng, std::string_view alphabet, std::size_t max_len) {
  std::string s;
  const auto n = rng.below(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

constexpr std::string_view kUrlish = "abcXYZ09-._~:/?#[]@!$&'()*+,;=% \"{}<>\n";

std::string urlish(Stream& rng) {
  static const char* prefixes[] = {"https://", "HTTP://", "ftp://", "", "https:/", "http://"};
  return prefixes[rng.below(6)] + random_string(rng, kUrlish, 30);
}

}  // namespace

TEST_CASE("canonicalize is idempotent and leaves nothing to trim") {
  Stream rng(1, "prop/canon");
  for (int i = 0; i < 3000; ++i) {
    const auto raw = urlish(rng);
    const auto once = canonicalize(raw);
    if (!once) continue;
    const auto twice = canonicalize(once->value());
    REQUIRE(twice);
    CHECK(twice->value() == once->value());
    CHECK(kTrimSet.find(once->value().back()) == std::string_view::npos);
    CHECK(has_accepted_scheme(once->value()));
    CHECK(once->value().find(' ') == std::string::npos);
  }
}

TEST_CASE("text candidates point at their bytes") {
  Stream rng(2, "prop/offsets");
  for (int i = 0; i < 500; ++i) {
    std::string doc;
    for (int k = 0; k < 6; ++k) doc += random_string(rng, "ab \n.(", 5) + urlish(rng);
    for (const auto& c : extract_from_text(doc, kId, WrapRepair::None)) {
      REQUIRE(c.byte_offset + c.raw.size() <= doc.size());
      CHECK(doc.compare(c.byte_offset, c.raw.size(), c.raw) == 0);
      CHECK(has_accepted_scheme(c.raw));
    }
    // Repair only ever joins tokens, so it never yields more of them.
    CHECK(extract_from_text(doc, kId).size() <= extract_from_text(doc, kId, WrapRepair::None).size());
  }
}

TEST_CASE("html and tei extractors agree with the planted oracle") {
  Stream rng(3, "prop/planted");
  for (int i = 0; i < 30; ++i) {
    const auto urls = fixtures::random_canonical_urls(rng.below(8), rng);
    const auto c = fixtures::generate_planted_corpus(urls, {FormatKind::Html, FormatKind::TeiXml}, i);
    const std::set<std::string> oracle(urls.begin(), urls.end());
    for (const auto& d : c.documents) {
      const auto cs = d.format == FormatKind::Html ? extract_from_html(d.content, kId) : extract_from_tei(d.content, kId);
      std::set<std::string> got;
      for (const auto& u : build_format_set(cs, d.format, kId).urls) got.insert(u.value());
      CHECK(got == oracle);
    }
  }
}

TEST_CASE("recall never drops when formats are added") {
  Stream rng(4, "prop/monotone");
  for (int round = 0; round < 100; ++round) {
    std::vector<GroundTruthEntry> es;
    for (int u = 0; u < 20; ++u)
      es.push_back({kId, *canonicalize(fmt::format("https://g.org/{}", u)), rng.below(2) == 0, false});
    es[0].valid = true;
    const GroundTruth gt(es);
    std::vector<ExtractionSet> sets;
    for (auto f : kAllFormats) {
      ExtractionSet s{kId, {f}, {}};
      for (int u = 0; u < 24; ++u)
        if (rng.below(3) == 0) s.urls.insert(*canonicalize(fmt::format("https://g.org/{}", u)));
      sets.push_back(s);
    }
    const auto combos = enumerate_combinations();
    const auto reports = evaluate_combinations(group_by_paper(sets), gt, combos);
    for (std::size_t a = 0; a < combos.size(); ++a)
      for (std::size_t b = 0; b < combos.size(); ++b)
        if (combos[a].is_subset_of(combos[b])) {
          CHECK(reports[a].recall <= reports[b].recall);
          CHECK(reports[a].valid_count <= reports[b].valid_count);
        }
  }
}

TEST_CASE("sampling returns distinct members of the right stratum") {
  Stream rng(5, "prop/sampling");
  for (int round = 0; round < 30; ++round) {
    std::string text;
    for (int m = 1; m <= 3; ++m)
      for (std::size_t k = 0, n = rng.below(8); k < n; ++k) text += fmt::format("2{}0{}.{:05d}\t202{}\t{}\n", round % 10, m, k + 1, round % 10, m);
    const auto manifest = parse_manifest(text, "/c");
    const auto per = 1 + rng.below(4);
    const auto s = stratified_sample(manifest, per, round);
    std::map<int, std::size_t> have, want;
    for (const auto& r : manifest.records) ++have[r.month];
    std::set<std::string> seen;
    for (const auto& r : s.records) {
      CHECK(manifest.find(r.paper_id));
      CHECK(seen.insert(r.paper_id.value()).second);
      ++want[r.month];
    }
    for (const auto& [m, n] : have) CHECK(want[m] == std::min<std::size_t>(n, per));
  }
}

TEST_CASE("candidate records survive a round trip") {
  Stream rng(6, "prop/records");
  std::vector<UrlCandidate> cs;
  for (int i = 0; i < 200; ++i) {
    const auto raw = std::string("https://") + random_string(rng, "ab%;:/?#", 12) + "x";
    cs.push_back({raw, kId, kAllFormats[rng.below(4)], random_string(rng, "ab\t%; /", 8) + "f", rng.below(1000),
                  ExtractionRule::RegexBody});
  }
  sort_candidates(cs);
  CHECK(parse_candidates(format_candidates(cs)) == cs);
}
