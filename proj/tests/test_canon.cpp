#include <doctest.h>

#include "urlx/canon.hpp"

using namespace urlx;

namespace {

std::string canon(std::string_view raw) {
  const auto c = canonicalize(raw);
  return c ? c->value() : std::string("<rejected>");
}

CanonicalUrl url(std::string_view raw) { return *canonicalize(raw); }

UrlCandidate cand(std::string raw, const PaperId& id, FormatKind f = FormatKind::Text) {
  return {std::move(raw), id, f, {}, 0, ExtractionRule::RegexBody};
}

}  // namespace

TEST_CASE("canonicalize") {
  CHECK(canon("HTTPS://GitHub.com/ABC/Def.") == "https://github.com/ABC/Def");
  CHECK(canon("https://en.org/wiki/X_(algorithm)") == "https://en.org/wiki/X_(algorithm)");
  CHECK(canon("https://a.org/x),") == "https://a.org/x");
  CHECK(canon("https://a.org/x]).;") == "https://a.org/x");
  CHECK(canon("https://a.org/f(x)?q=[1]") == "https://a.org/f(x)?q=[1]");
  CHECK(canon("https://a.org/'quoted'") == "https://a.org/'quoted");
  CHECK(canon("https://User@Host.ORG:8080/P") == "https://User@host.org:8080/P");
  CHECK(canon("http://[2001:DB8::1]/x") == "http://[2001:db8::1]/x");
  CHECK(canon("https://a.org/%7Euser") == "https://a.org/%7Euser");
  CHECK(canon("https://www.a.org") == "https://www.a.org");
  CHECK(canon("https://a.org/") == "https://a.org/");
  CHECK(canon("https://") == "<rejected>");
  CHECK(canon("https://.,") == "<rejected>");
  CHECK(canon("https://:80/x") == "<rejected>");
  CHECK(canon("mailto:me@a.org") == "<rejected>");
  CHECK(canon("#S2") == "<rejected>");
  CHECK(canon("https://a.org x") == "<rejected>");

  const auto c = url("HTTP://Ex.Org:81/a/b?c#d");
  CHECK(c.scheme() == "http");
  CHECK(c.host() == "ex.org");
  CHECK(c.path() == "/a/b");
}

TEST_CASE("self references") {
  const auto p = PaperId::from("2401.01234");
  CHECK(is_self_reference(url("https://arxiv.org/abs/2401.01234v2"), p));
  CHECK(is_self_reference(url("https://arxiv.org/pdf/2401.01234.pdf"), p));
  CHECK(is_self_reference(url("http://export.arxiv.org/abs/arXiv:2401.01234"), p));
  CHECK(is_self_reference(url("https://arxiv.org/html/2401.01234v1/"), p));
  CHECK_FALSE(is_self_reference(url("https://arxiv.org/abs/2105.00001"), p));
  CHECK_FALSE(is_self_reference(url("https://arxiv.org/abs/2401.012345"), p));
  CHECK_FALSE(is_self_reference(url("https://notarxiv.org/abs/2401.01234"), p));
  CHECK_FALSE(is_self_reference(url("https://github.com/x/2401.01234"), p));

  const auto old = PaperId::from("hep-th/9702001");
  CHECK(is_self_reference(url("https://arxiv.org/pdf/hep-th/9702001"), old));
  CHECK(is_self_reference(url("https://arxiv.org/abs/hep-th/9702001v3"), old));
  CHECK_FALSE(is_self_reference(url("https://arxiv.org/abs/hep-ph/9702001"), old));

  const std::set<CanonicalUrl> s{url("https://arxiv.org/abs/2401.01234v2"), url("https://arxiv.org/abs/2105.00001")};
  CHECK(filter_self_refs(s, p) == std::set<CanonicalUrl>{url("https://arxiv.org/abs/2105.00001")});
}

TEST_CASE("format sets from candidates") {
  const auto p = PaperId::from("2401.01234");
  SUBCASE("dedup") {
    const std::vector<UrlCandidate> cs{cand("HTTPS://A.org/x.", p), cand("https://a.org/x", p)};
    const auto s = build_format_set(cs, FormatKind::Text, p);
    CHECK(s.urls.size() == 1);
    CHECK(s.formats == FormatSet{FormatKind::Text});
  }
  SUBCASE("empty") { CHECK(build_format_set({}, FormatKind::Html, p).urls.empty()); }
  SUBCASE("self reference dropped") {
    const std::vector<UrlCandidate> cs{cand("https://a.org", p), cand("https://arxiv.org/abs/2401.01234", p),
                                       cand("https://b.org", p)};
    CHECK(build_format_set(cs, FormatKind::Text, p).urls.size() == 2);
  }
  SUBCASE("other formats and papers ignored") {
    const auto q = PaperId::from("2401.09999");
    const std::vector<UrlCandidate> cs{cand("https://a.org", p), cand("https://b.org", p, FormatKind::Html),
                                       cand("https://c.org", q)};
    CHECK(build_format_set(cs, FormatKind::Text, p).urls.size() == 1);
    CHECK(build_format_sets(cs).size() == 3);
  }
}

TEST_CASE("extraction set records") {
  const auto p = PaperId::from("2401.01234");
  const auto q = PaperId::from("hep-th/9702001");
  std::vector<ExtractionSet> sets{{q, {FormatKind::Html}, {url("https://b.org/x;y"), url("https://a.org")}},
                                  {p, {FormatKind::Text, FormatKind::Latex}, {url("https://c.org/%09")}}};
  const auto text = format_extraction_sets(sets);
  const auto back = parse_extraction_sets(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].paper_id == p);
  CHECK(back[0].formats == FormatSet{FormatKind::Text, FormatKind::Latex});
  CHECK(back[1].urls == sets[0].urls);
  CHECK(format_extraction_sets(back) == text);
  CHECK_THROWS_AS(parse_extraction_sets("2401.01234\ttext\tHTTPS://A.org\n"), ParseError);
  CHECK_THROWS_AS(parse_extraction_sets("2401.01234\tpdf\thttps://a.org\n"), ParseError);
}
