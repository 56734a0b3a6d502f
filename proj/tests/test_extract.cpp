#include <doctest.h>

#include <filesystem>

#include "urlx/extract.hpp"
#include "urlx/io.hpp"

using namespace urlx;

namespace {

const PaperId kId = PaperId::from("2401.00001");

std::vector<std::string> raws(const std::vector<UrlCandidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.raw);
  return out;
}

using Strings = std::vector<std::string>;

LatexExtraction latex(std::string_view src) {
  const std::vector<SourceFile> files{{"p.tex", src}};
  return extract_from_latex(files, kId);
}

}  // namespace

TEST_CASE("grammar helpers") {
  CHECK(scheme_prefix_length("https://x") == 8);
  CHECK(scheme_prefix_length("HTTP://x") == 7);
  CHECK(scheme_prefix_length("ftp://x") == 6);
  CHECK(scheme_prefix_length("mailto:a@b") == 0);
  CHECK(scheme_prefix_length("https:/x") == 0);
  CHECK(is_url_char('~'));
  CHECK(is_url_char('%'));
  CHECK_FALSE(is_url_char(' '));
  CHECK_FALSE(is_url_char('"'));
  CHECK_FALSE(is_url_char('<'));
  CHECK_FALSE(is_url_char('{'));
}

TEST_CASE("text extractor") {
  SUBCASE("bare url") {
    const auto cs = extract_from_text("code at https://github.com/example-lab/url-tools today", kId);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].raw == "https://github.com/example-lab/url-tools");
    CHECK(cs[0].byte_offset == 8);
    CHECK(cs[0].rule == ExtractionRule::RegexBody);
    CHECK(cs[0].format == FormatKind::Text);
    CHECK(cs[0].paper_id == kId);
  }
  SUBCASE("empty") { CHECK(extract_from_text("", kId).empty()); }
  SUBCASE("wrap repair") {
    const std::string s = "see https://exam\nple.org/x end";
    CHECK(raws(extract_from_text(s, kId, WrapRepair::Conservative)) == Strings{"https://example.org/x"});
    CHECK(raws(extract_from_text(s, kId, WrapRepair::None)) == Strings{"https://exam"});
    CHECK(raws(extract_from_text("see https://exam\r\nple.org/x end", kId)) == Strings{"https://example.org/x"});
  }
  SUBCASE("wrap repair leaves separate urls alone") {
    const std::string s = "https://a.org/x\nhttps://b.org/y";
    CHECK(raws(extract_from_text(s, kId)) == Strings{"https://a.org/x", "https://b.org/y"});
  }
  SUBCASE("wrap repair does not join across a space") {
    CHECK(raws(extract_from_text("https://a.org/x \nmore", kId)) == Strings{"https://a.org/x"});
  }
  SUBCASE("hyphen dropped only inside the path") {
    CHECK(raws(extract_from_text("https://a.org/long-\nname end", kId)) == Strings{"https://a.org/longname"});
    CHECK(raws(extract_from_text("https://my-\nhost.org/p end", kId)) == Strings{"https://my-host.org/p"});
  }
  SUBCASE("scheme boundary") {
    CHECK(extract_from_text("xhttps://a.org", kId).empty());
    CHECK(raws(extract_from_text("(https://a.org/x).", kId)) == Strings{"https://a.org/x)."});
    CHECK(raws(extract_from_text("HTTPS://A.org", kId)) == Strings{"HTTPS://A.org"});
  }
  SUBCASE("several in order") {
    const auto cs = extract_from_text("a ftp://f.org/x b http://h.org c", kId);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].byte_offset < cs[1].byte_offset);
  }
}

TEST_CASE("latex extractor") {
  SUBCASE("url macro") {
    const auto r = latex("\\url{https://github.com/kermitt2/grobid}");
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.candidates[0].raw == "https://github.com/kermitt2/grobid");
    CHECK(r.candidates[0].rule == ExtractionRule::UrlMacro);
    CHECK(r.candidates[0].byte_offset == 5);
  }
  SUBCASE("comment") { CHECK(latex("% https://hidden.example.org").candidates.empty()); }
  SUBCASE("href plus body") {
    const auto r = latex("\\href{https://a.org/p}{text} and https://b.org");
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].raw == "https://a.org/p");
    CHECK(r.candidates[0].rule == ExtractionRule::UrlMacro);
    CHECK(r.candidates[1].raw == "https://b.org");
    CHECK(r.candidates[1].rule == ExtractionRule::RegexBody);
  }
  SUBCASE("href text that is itself a url") {
    const auto r = latex("\\href{https://a.org/p}{https://shown.org}");
    CHECK(raws(r.candidates) == Strings{"https://a.org/p", "https://shown.org"});
  }
  SUBCASE("urladdr and escaped percent") {
    const auto r = latex("\\urladdr{https://u.org/~me}\n50\\% done % https://x.org\nhttps://y.org/a");
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].rule == ExtractionRule::UrlAddrMacro);
    CHECK(r.candidates[1].raw == "https://y.org/a");
  }
  SUBCASE("line ending in a double backslash") {
    const auto r = latex("text\\\\ % \\url{https://x.org}\n");
    CHECK(r.candidates.empty());
  }
  SUBCASE("unbalanced brace is a warning") {
    const auto r = latex("\\url{https://broken.org/x\n\nand https://ok.org");
    CHECK(r.warnings.size() == 1);
    // The skipped argument is still ordinary source text.
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].rule == ExtractionRule::RegexBody);
    CHECK(r.candidates[1].raw == "https://ok.org");
  }
  SUBCASE("space before the argument") {
    CHECK(raws(latex("\\url  {https://a.org}").candidates) == Strings{"https://a.org"});
  }
  SUBCASE("multiple files keep their order") {
    const std::vector<SourceFile> files{{"p.tex", "\\url{https://b.org}"}, {"p.bbl", "\\url{https://a.org}"}};
    const auto r = extract_from_latex(files, kId);
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].file == "p.tex");
    CHECK(r.candidates[1].file == "p.bbl");
  }
  SUBCASE("non-url macro argument") { CHECK(latex("\\url{./local/file}").candidates.empty()); }
}

TEST_CASE("html extractor") {
  SUBCASE("anchor") {
    const auto cs = extract_from_html("<a href=\"https://github.com/kermitt2/grobid\">GROBID</a>", kId);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].raw == "https://github.com/kermitt2/grobid");
    CHECK(cs[0].rule == ExtractionRule::AnchorHref);
  }
  SUBCASE("fragment") { CHECK(extract_from_html("<a href=\"#S2\">Sec 2</a>", kId).empty()); }
  SUBCASE("duplicates kept") {
    CHECK(extract_from_html("<a href=\"https://a.org\">x</a><a href=\"https://a.org\">y</a>", kId).size() == 2);
  }
  SUBCASE("tolerant") {
    const std::string doc =
        "<!DOCTYPE html><HTML><p>plain https://text.org <img src='https://img.org/i.png'>"
        "<!-- <a href='https://comment.org'> --><script>var a='<a href=\"https://js.org\">';</script>"
        "<A class=x HREF='https://q.org/?a=1&amp;b=2'>q</A><a href=mailto:me@x.org>m</a>"
        "<a href = https://unq.org/p>u</a><a name=top><a href=\"  https://sp.org  \">s";
    CHECK(raws(extract_from_html(doc, kId)) == Strings{"https://q.org/?a=1&b=2", "https://unq.org/p", "https://sp.org"});
  }
}

TEST_CASE("tei extractor") {
  SUBCASE("ref") {
    const auto cs = extract_from_tei("<ref target=\"https://github.com/kermitt2/grobid\"/>", kId);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].rule == ExtractionRule::TargetAttr);
  }
  SUBCASE("internal") { CHECK(extract_from_tei("<ref target=\"#b12\"/>", kId).empty()); }
  SUBCASE("element name irrelevant") {
    CHECK(extract_from_tei("<r><ptr target=\"https://x.org\"/><ptr target=\"https://x.org\"/></r>", kId).size() == 2);
  }
  SUBCASE("entities and multiple pointers") {
    const auto cs = extract_from_tei(
        "<?xml version=\"1.0\"?>\n<TEI xmlns=\"http://www.tei-c.org/ns/1.0\"><text>"
        "<ref target=\"https://a.org/?x=1&amp;y=2 #b3 https://b.org\">r</ref></text></TEI>",
        kId);
    CHECK(raws(cs) == Strings{"https://a.org/?x=1&y=2", "https://b.org"});
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(extract_from_tei("<a><b></a>", kId), XmlError);
    CHECK_THROWS_AS(extract_from_tei("<a target=\"x\" target=\"y\"/>", kId), XmlError);
    CHECK_THROWS_AS(extract_from_tei("<a>&bogus;</a>", kId), XmlError);
    CHECK_THROWS_AS(extract_from_tei("<a/><b/>", kId), XmlError);
    CHECK_THROWS_AS(extract_from_tei("", kId), XmlError);
    CHECK_THROWS_AS(extract_from_tei("<a x=1/>", kId), XmlError);
    try {
      extract_from_tei("<a>\n  <b>\n</a>", kId);
      FAIL("expected an error");
    } catch (const XmlError& e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("rules belong to formats") {
  CHECK(rule_allowed(ExtractionRule::RegexBody, FormatKind::Latex));
  CHECK(rule_allowed(ExtractionRule::UrlMacro, FormatKind::Latex));
  CHECK_FALSE(rule_allowed(ExtractionRule::AnchorHref, FormatKind::Text));
  CHECK(rule_allowed(ExtractionRule::TargetAttr, FormatKind::TeiXml));
  for (auto r : {ExtractionRule::RegexBody, ExtractionRule::UrlMacro, ExtractionRule::UrlAddrMacro,
                 ExtractionRule::AnchorHref, ExtractionRule::TargetAttr})
    CHECK(parse_rule(rule_token(r)) == r);
}

TEST_CASE("document extraction isolates failures") {
  const auto dir = std::filesystem::temp_directory_path() / "urlx_test_extract_doc";
  std::filesystem::remove_all(dir);
  write_file(dir / "p.txt", "see https://t.org/x\n");
  write_file(dir / "p.tei.xml", "<TEI><ref target=\"https://x.org\"></TEI>");
  write_file(dir / "p.html", "<a href=\"https://h.org\">h</a>");
  const auto m = parse_manifest("2401.00001\t2024\t1\ttext=p.txt;teixml=p.tei.xml;html=p.html;latex=missing.tex\n", dir);
  const auto all = FormatSet{FormatKind::Text, FormatKind::Latex, FormatKind::Html, FormatKind::TeiXml};
  const auto doc = extract_document(m.records[0], all, WrapRepair::Conservative);
  CHECK(doc.attempted == all);
  CHECK(doc.failures.contains(FormatKind::TeiXml));
  CHECK(doc.failures.contains(FormatKind::Latex));
  CHECK(raws(doc.candidates) == Strings{"https://t.org/x", "https://h.org"});

  const auto only = extract_document(m.records[0], FormatSet{FormatKind::Html}, WrapRepair::Conservative);
  CHECK(only.failures.empty());
  CHECK(raws(only.candidates) == Strings{"https://h.org"});
  std::filesystem::remove_all(dir);
}

TEST_CASE("candidate records round trip") {
  std::vector<UrlCandidate> cs = extract_from_text("a https://x.org/;p b", kId, WrapRepair::None, "dir/my file.txt");
  cs.push_back({"https://y.org/%7Ea", kId, FormatKind::Html, "p\tq.html", 17, ExtractionRule::AnchorHref});
  sort_candidates(cs);
  const auto text = format_candidates(cs);
  CHECK(parse_candidates(text) == cs);
  CHECK_THROWS_AS(parse_candidates("2401.00001\ttext\n"), ParseError);
}
