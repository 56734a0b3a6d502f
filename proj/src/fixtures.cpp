#include "urlx/fixtures.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <fmt/format.h>

#include "urlx/error.hpp"
#include "urlx/io.hpp"

namespace urlx::fixtures {

namespace {

constexpr std::array<std::string_view, 24> kWords = {
    "data",      "model",   "results",   "we",      "propose", "method",     "the",        "of",
    "analysis",  "shown",   "section",   "table",   "figure",  "baseline",   "evaluation", "corpus",
    "available", "release", "code",      "further", "details", "experiments", "appendix",  "see"};

std::string_view pick_word(Stream& rng) { return kWords[rng.below(kWords.size())]; }

std::string filler(Stream& rng, std::size_t words) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out.push_back(' ');
    out += pick_word(rng);
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Greedy wrap that never splits a chunk; a chunk may carry its own '\n'.
std::string wrap_chunks(const std::vector<std::string>& chunks, std::size_t width) {
  std::string out;
  std::size_t col = 0;
  for (const auto& chunk : chunks) {
    const auto first_line = chunk.substr(0, chunk.find('\n'));
    if (col > 0 && col + 1 + first_line.size() > width) {
      out.push_back('\n');
      col = 0;
    } else if (col > 0) {
      out.push_back(' ');
      ++col;
    }
    out += chunk;
    const auto nl = chunk.rfind('\n');
    col = nl == std::string::npos ? col + chunk.size() : chunk.size() - nl - 1;
  }
  out.push_back('\n');
  return out;
}

// Index at which url can be split across lines so that conservative
// wrap repair restores it exactly.
std::optional<std::size_t> break_point(std::string_view url, Stream& rng) {
  const std::size_t lo = scheme_prefix_length(url) + 1;
  if (url.size() < lo + 2) return std::nullopt;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const std::size_t p = lo + static_cast<std::size_t>(rng.below(url.size() - lo - 1));
    if (url[p - 1] == '-' || has_accepted_scheme(url.substr(p))) continue;
    return p;
  }
  return std::nullopt;
}

std::string text_document(std::span<const std::string> urls, Stream& rng, bool force_break) {
  std::vector<std::string> chunks;
  for (std::size_t k = 0; k < 6; ++k) chunks.emplace_back(pick_word(rng));
  bool broken = !force_break;
  for (const auto& u : urls) {
    for (std::size_t k = 0, n = 1 + rng.below(6); k < n; ++k) chunks.emplace_back(pick_word(rng));
    std::string token = u;
    if (!broken) {
      if (const auto p = break_point(u, rng)) {
        token = u.substr(0, *p) + "\n" + u.substr(*p);
        broken = true;
      }
    }
    // The URL is always followed by a word on its own line, so it never
    // ends a line unless it was broken on purpose.
    switch (rng.below(4)) {
      case 0: chunks.push_back(fmt::format("({}) {}", token, pick_word(rng))); break;
      case 1: chunks.push_back(fmt::format("{}. {}", token, pick_word(rng))); break;
      case 2: chunks.push_back(fmt::format("<{}>, {}", token, pick_word(rng))); break;
      default: chunks.push_back(fmt::format("{} {}", token, pick_word(rng)));
    }
  }
  chunks.push_back("mail to author@decoy.invalid or www.decoy.invalid/no-scheme end");
  return wrap_chunks(chunks, 72);
}

std::pair<std::string, std::string> latex_documents(std::span<const std::string> urls, Stream& rng) {
  std::string tex =
      "\\documentclass{article}\n"
      "\\usepackage{hyperref} % https://decoy.invalid/preamble-comment\n"
      "\\begin{document}\n"
      "% commented out: \\url{https://decoy.invalid/commented-macro}\n";
  std::string bbl = "\\begin{thebibliography}{99}\n";
  for (std::size_t i = 0; i < urls.size(); ++i) {
    const auto& u = urls[i];
    switch (rng.below(5)) {
      case 0:
        tex += fmt::format("About 50\\% of {} at \\url{{{}}} {}.\n", filler(rng, 2), u, filler(rng, 2));
        break;
      case 1:
        tex += fmt::format("{} \\href{{{}}}{{{}}} {}.\n", filler(rng, 3), u, filler(rng, 2), filler(rng, 2));
        break;
      case 2:
        tex += fmt::format("\\footnote{{\\url{{{}}}}} {} % trailing note https://decoy.invalid/c{}\n", u,
                           filler(rng, 2), i);
        break;
      default:
        bbl += fmt::format("\\bibitem{{r{}}} {}.\n\\newblock \\url{{{}}}.\n\n", i, filler(rng, 4), u);
    }
  }
  tex += "\\bibliography{refs}\n\\end{document}\n";
  bbl += "\\end{thebibliography}\n";
  return {tex, bbl};
}

std::string html_document(std::span<const std::string> urls, Stream& rng) {
  std::string out =
      "<!DOCTYPE html><html lang=\"en\">\n<head><meta charset=\"utf-8\"><title>Synthetic</title>\n"
      "<link rel=\"stylesheet\" href=\"https://decoy.invalid/LaTeXML.css\" type=\"text/css\">\n"
      "<script>var s = \"<a href='https://decoy.invalid/in-script'>x</a>\";</script>\n"
      "</head>\n<body>\n<article class=\"ltx_document\">\n"
      "<!-- <a href=\"https://decoy.invalid/in-comment\">old</a> -->\n";
  for (const auto& u : urls) {
    const auto esc = xml_escape(u);
    switch (rng.below(3)) {
      case 0:
        out += fmt::format("<p class=\"ltx_p\">{} <a href=\"{}\" class=\"ltx_ref ltx_url ltx_font_typewriter\" "
                           "title=\"\">{}</a> {}</p>\n",
                           filler(rng, 3), esc, esc, filler(rng, 2));
        break;
      case 1:
        out += fmt::format("<p>{} <A class=ltx_ref HREF='{}'>{}</A>.</p>\n", filler(rng, 2), esc,
                           filler(rng, 1));
        break;
      default:
        out += fmt::format("<span class=\"ltx_note\"><a\n  href=\"{}\"\n>{}</a></span>\n", esc, esc);
    }
    out += fmt::format("<a href=\"#S{}\" class=\"ltx_ref\">Section</a> ", rng.below(9) + 1);
  }
  out += "<a href=\"mailto:author@decoy.invalid\">mail</a>\n"
         "<img src=\"https://decoy.invalid/figure.png\" alt=\"\"/>\n"
         "<p>plain text https://decoy.invalid/plain is not an anchor</p>\n"
         "<a name=\"bib1\">anchor without href</a>\n"
         "</article>\n</body>\n</html>\n";
  return out;
}

std::string tei_document(std::span<const std::string> urls, Stream& rng) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<TEI xml:space=\"preserve\" xmlns=\"http://www.tei-c.org/ns/1.0\" "
      "xmlns:xlink=\"http://www.w3.org/1999/xlink\">\n"
      "<teiHeader><fileDesc><titleStmt><title level=\"a\" type=\"main\">Synthetic</title></titleStmt>"
      "</fileDesc></teiHeader>\n<text><body><div>\n";
  std::string back;
  for (std::size_t i = 0; i < urls.size(); ++i) {
    const auto esc = xml_escape(urls[i]);
    if (rng.below(2) == 0) {
      out += fmt::format("<p>{} <ref type=\"url\" target=\"{}\">{}</ref> {} <ref type=\"bibr\" "
                         "target=\"#b{}\">[{}]</ref></p>\n",
                         filler(rng, 3), esc, esc, filler(rng, 2), i, i + 1);
    } else {
      back += fmt::format("<biblStruct xml:id=\"b{}\"><monogr><title>{}</title><ptr target=\"{}\"/></monogr>"
                          "</biblStruct>\n",
                          i, filler(rng, 2), esc);
    }
  }
  out += "<figure xml:id=\"fig_0\"><graphic url=\"https://decoy.invalid/fig.png\"/></figure>\n"
         "<p><ref type=\"figure\" target=\"#fig_0\">Figure 1</ref> &amp; more</p>\n"
         "</div></body>\n<back><listBibl>\n" +
         back + "</listBibl></back></text>\n</TEI>\n";
  return out;
}

}  // namespace

PlantedCorpus generate_planted_corpus(std::span<const std::string> urls, FormatSet formats, std::uint64_t seed,
                                      PlantedOptions options) {
  for (const auto& u : urls)
    if (u.empty() || std::any_of(u.begin(), u.end(), [](unsigned char c) { return std::isspace(c); }))
      throw Error(fmt::format("planted URL contains whitespace or is empty: '{}'", u));

  PlantedCorpus corpus;
  corpus.oracle.assign(urls.begin(), urls.end());
  for (const auto f : formats.members()) {
    Stream rng(seed, fmt::format("planted/{}", format_token(f)));
    switch (f) {
      case FormatKind::Text:
        corpus.documents.push_back({f, "paper.txt", text_document(urls, rng, options.force_text_line_break)});
        break;
      case FormatKind::Latex: {
        auto [tex, bbl] = latex_documents(urls, rng);
        corpus.documents.push_back({f, "paper.tex", std::move(tex)});
        corpus.documents.push_back({f, "paper.bbl", std::move(bbl)});
        break;
      }
      case FormatKind::Html:
        corpus.documents.push_back({f, "paper.html", html_document(urls, rng)});
        break;
      case FormatKind::TeiXml:
        corpus.documents.push_back({f, "paper.tei.xml", tei_document(urls, rng)});
        break;
    }
  }
  return corpus;
}

std::vector<std::string> random_canonical_urls(std::size_t count, Stream& rng) {
  static constexpr std::string_view kAlpha = "abcdefghijklmnopqrstuvwxyz";
  static constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  static constexpr std::string_view kSegmentPunct = "-._~!$&'*+,;=:@";
  static constexpr std::array<std::string_view, 8> kTlds = {"org", "com", "net", "io", "edu", "de", "cc", "ai"};
  static constexpr std::array<std::string_view, 4> kSchemes = {"https", "https", "http", "ftp"};
  static constexpr std::string_view kHex = "0123456789ABCDEF";

  const auto from = [&](std::string_view set) { return set[rng.below(set.size())]; };
  const auto label = [&] {
    std::string s(1, from(kAlpha));
    for (std::size_t k = 0, n = rng.below(9); k < n; ++k) s.push_back(rng.below(8) ? from(kAlnum.substr(0, 36)) : '-');
    if (s.back() == '-') s.back() = 'x';
    return s;
  };
  const auto segment = [&] {
    std::string s;
    for (std::size_t k = 0, n = 1 + rng.below(10); k < n; ++k) {
      const auto r = rng.below(20);
      if (r < 14) s.push_back(from(kAlnum));
      else if (r < 18) s.push_back(from(kSegmentPunct));
      else if (r < 19) s += fmt::format("%{}{}", from(kHex), from(kHex));
      else s += "(" + std::string(1, from(kAlnum)) + ")";
    }
    return s;
  };

  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string u = std::string(kSchemes[rng.below(kSchemes.size())]) + "://";
    if (rng.below(10) == 0) u += "www.";
    for (std::size_t k = 0, n = 1 + rng.below(2); k < n; ++k) u += label() + ".";
    u += kTlds[rng.below(kTlds.size())];
    if (rng.below(10) == 0) u += fmt::format(":{}", 1000 + rng.below(9000));
    for (std::size_t k = 0, n = rng.below(5); k < n; ++k) u += "/" + segment();
    if (rng.below(5) == 0) u += "/";
    if (rng.below(4) == 0) u += fmt::format("?{}={}&{}={}", label(), segment(), label(), label());
    if (rng.below(6) == 0) u += "#" + segment();
    const auto c = canonicalize(u);
    if (!c || c->value() != u || c->host().find("arxiv") != std::string::npos) continue;
    if (seen.insert(u).second) out.push_back(std::move(u));
  }
  return out;
}

namespace {

constexpr FormatSet T{FormatKind::Text}, L{FormatKind::Latex}, H{FormatKind::Html}, X{FormatKind::TeiXml};
constexpr FormatSet operator|(FormatSet a, FormatSet b) { return FormatSet::from_bits(a.bits() | b.bits()); }

// Valid regions follow from the 15 published union sizes by inclusion-exclusion
// (they are the only non-negative solution). Invalid counts are the unique
// assignment under which every published precision survives 2-decimal rounding.
constexpr std::array<PilotRegion, 15> kRegions = {{
    {T, 3, 1, 30},
    {L, 7, 6, 18},
    {H, 17, 5, 27},
    {X, 4, 2, 0},
    {T | L, 6, 5, 0},
    {L | H, 1, 1, 0},
    {H | X, 21, 8, 0},
    {T | L | H, 3, 3, 0},
    {T | H | X, 7, 2, 0},
    {L | H | X, 4, 3, 0},
    {T | L | H | X, 3, 3, 0},
    {T | H, 0, 0, 0},
    {T | X, 0, 0, 0},
    {L | X, 0, 0, 0},
    {FormatSet{}, 11, 2, 0},
}};

constexpr std::array<std::string_view, 10> kPilotPapers = {
    "0905.0101", "1103.0202", "1306.0303", "1409.0404", "1512.00505",
    "1702.00606", "1808.00707", "1911.00808", "2104.00909", "2307.01010"};

std::string oads_url(std::size_t k) {
  switch (k % 8) {
    case 0: return fmt::format("https://github.com/lab{}/toolkit-{}", k % 7, k);
    case 1: return fmt::format("https://zenodo.org/record/{}", 4100000 + k * 37);
    case 2: return fmt::format("https://huggingface.co/datasets/group{}/corpus-{}", k % 5, k);
    case 3: return fmt::format("https://figshare.com/articles/dataset/measurements_{}/{}", k, 9000 + k);
    case 4: return fmt::format("https://gitlab.com/team{}/solver-{}", k % 3, k);
    case 5: return fmt::format("https://osf.io/x{}k{}/", k % 10, k);
    case 6: return fmt::format("https://www.kaggle.com/datasets/user{}/set-{}", k % 4, k);
    default: return fmt::format("https://sourceforge.net/projects/code-{}/", k);
  }
}

std::string plain_url(std::size_t k) {
  switch (k % 5) {
    case 0: return fmt::format("https://www.nature.com/articles/s41586-0{}-{}", 20 + k % 5, 1000 + k);
    case 1: return fmt::format("https://en.wikipedia.org/wiki/Topic_{}", k);
    case 2: return fmt::format("http://www.conference{}.org/program.html", 2000 + k);
    case 3: return fmt::format("https://doi.org/10.1103/PhysRevD.{}.0{}", 80 + k % 20, 40000 + k);
    default: return fmt::format("https://www.nsf.gov/awardsearch/showAward?AWD_ID={}", 1500000 + k);
  }
}

// Strings a format's conversion produced but that are not in the PDF.
std::string invalid_url(FormatKind f, std::size_t k) {
  switch (f) {
    case FormatKind::Text: return fmt::format("https://proceedings.example-conf.org/paper/20{}/hashThe{}", 10 + k % 10, k);
    case FormatKind::Latex: return fmt::format("http://www.ctan.org/pkg/package{}", k);
    default: return fmt::format("http://dlmf.nist.gov/LaTeXML/build-{}", k);
  }
}

}  // namespace

std::span<const PilotRegion> pilot_regions() { return kRegions; }

PilotFixture pilot_counts_fixture() {
  std::map<std::pair<std::size_t, FormatKind>, std::set<CanonicalUrl>> sets;
  std::vector<GroundTruthEntry> gt;
  std::vector<std::string> overrides;
  std::size_t serial = 0;
  std::size_t oads_serial = 0;
  std::size_t offlist_left = 2;

  const auto add = [&](const std::string& raw, FormatSet formats, bool valid, bool oads) {
    const std::size_t paper = serial++ % kPilotPapers.size();
    const auto id = PaperId::from(kPilotPapers[paper]);
    auto url = canonicalize(raw);
    if (!url || url->value() != raw) throw Error("fixture url not canonical: " + raw);
    for (const auto f : formats.members()) sets[{paper, f}].insert(*url);
    gt.push_back({id, *url, valid, oads});
  };

  for (const auto& r : kRegions) {
    for (int k = 0; k < r.valid; ++k) {
      const bool oads = k < r.oads;
      if (!oads) {
        add(plain_url(serial), r.formats, true, false);
      } else if (offlist_left > 0 && r.formats.size() >= 3) {
        // Dataset pages on a lab server: OADS by human judgement, not by host.
        --offlist_left;
        const std::string u = fmt::format("https://www.cs.example.edu/~group/data/release-{}.tar.gz", serial);
        overrides.push_back(fmt::format("{}\t{}\t1", kPilotPapers[serial % kPilotPapers.size()], u));
        add(u, r.formats, true, true);
        ++oads_serial;
      } else {
        add(oads_url(oads_serial++), r.formats, true, true);
      }
    }
    for (int k = 0; k < r.invalid; ++k) {
      const auto f = r.formats.members().front();
      add(invalid_url(f, serial), r.formats, false, false);
    }
  }

  PilotFixture fx;
  for (auto& [key, urls] : sets)
    fx.sets.push_back({PaperId::from(kPilotPapers[key.first]), FormatSet{key.second}, std::move(urls)});
  fx.ground_truth = GroundTruth(std::move(gt));
  fx.overrides_rules = "# Human OADS labels for links the host rules cannot see.\n[overrides]\n";
  for (const auto& o : overrides) fx.overrides_rules += o + "\n";
  return fx;
}

void write_pilot_fixture(const PilotFixture& fixture, const std::filesystem::path& dir) {
  write_file(dir / "canonical_sets.tsv", format_extraction_sets(fixture.sets));
  write_file(dir / "ground_truth.tsv", format_ground_truth(fixture.ground_truth));
  write_file(dir / "overrides.rules", fixture.overrides_rules);
}

}  // namespace urlx::fixtures
