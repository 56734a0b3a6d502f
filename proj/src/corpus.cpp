#include "urlx/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "urlx/error.hpp"
#include "urlx/io.hpp"
#include "urlx/random.hpp"

namespace urlx {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

bool is_lower_word(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c >= 'a' && c <= 'z';
  });
}

int two_digits(std::string_view s) { return (s[0] - '0') * 10 + (s[1] - '0'); }

// archive names: lowercase words joined by '-', optional ".XX" subject class
bool valid_archive(std::string_view a) {
  if (const auto dot = a.find('.'); dot != std::string_view::npos) {
    const auto sc = a.substr(dot + 1);
    if (sc.size() != 2 || !std::isupper(static_cast<unsigned char>(sc[0])) ||
        !std::isupper(static_cast<unsigned char>(sc[1])))
      return false;
    a = a.substr(0, dot);
  }
  for (auto part : split(a, '-'))
    if (!is_lower_word(part)) return false;
  return true;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

const std::vector<std::filesystem::path> kNoPaths;

}  // namespace

std::string_view format_token(FormatKind f) {
  switch (f) {
    case FormatKind::Text: return "text";
    case FormatKind::Latex: return "latex";
    case FormatKind::Html: return "html";
    case FormatKind::TeiXml: return "teixml";
  }
  return "?";
}

std::string_view format_label(FormatKind f) {
  switch (f) {
    case FormatKind::Text: return "Text";
    case FormatKind::Latex: return "LaTeX";
    case FormatKind::Html: return "HTML";
    case FormatKind::TeiXml: return "XML";
  }
  return "?";
}

std::optional<FormatKind> parse_format(std::string_view token) {
  for (auto f : kAllFormats)
    if (format_token(f) == token) return f;
  return std::nullopt;
}

std::vector<FormatKind> FormatSet::members() const {
  std::vector<FormatKind> out;
  for (auto f : kAllFormats)
    if (contains(f)) out.push_back(f);
  return out;
}

std::string FormatSet::tokens(char sep) const {
  std::string out;
  for (auto f : members()) {
    if (!out.empty()) out.push_back(sep);
    out += format_token(f);
  }
  return out;
}

std::string FormatSet::label() const {
  std::string out;
  for (auto f : members()) {
    if (!out.empty()) out += " + ";
    out += format_label(f);
  }
  return out;
}

std::optional<FormatSet> FormatSet::parse(std::string_view text) {
  FormatSet s;
  std::string norm(text);
  std::replace(norm.begin(), norm.end(), '+', ',');
  for (auto tok : split(norm, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    const auto f = parse_format(tok);
    if (!f) return std::nullopt;
    s.insert(*f);
  }
  return s;
}

std::optional<PaperId> PaperId::parse(std::string_view text) {
  PaperId id;
  std::string_view yymm;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto archive = text.substr(0, slash);
    const auto number = text.substr(slash + 1);
    if (!valid_archive(archive) || number.size() != 7 || !all_digits(number)) return std::nullopt;
    yymm = number.substr(0, 4);
    id.old_style_ = true;
  } else {
    const auto dot = text.find('.');
    if (dot != 4) return std::nullopt;
    const auto number = text.substr(5);
    yymm = text.substr(0, 4);
    if (!all_digits(yymm) || !all_digits(number) || (number.size() != 4 && number.size() != 5))
      return std::nullopt;
  }
  const int yy = two_digits(yymm.substr(0, 2));
  const int mm = two_digits(yymm.substr(2, 2));
  if (mm < 1 || mm > 12) return std::nullopt;
  id.year_ = yy >= 91 ? 1900 + yy : 2000 + yy;
  id.month_ = mm;
  id.value_ = std::string(text);
  return id;
}

PaperId PaperId::from(std::string_view text) {
  auto id = parse(text);
  if (!id) throw Error(fmt::format("not an arXiv identifier: '{}'", text));
  return *std::move(id);
}

const std::vector<std::filesystem::path>& DocumentRecord::paths(FormatKind f) const {
  const auto it = files.find(f);
  return it == files.end() ? kNoPaths : it->second;
}

const DocumentRecord* Manifest::find(const PaperId& id) const {
  for (const auto& r : records)
    if (r.paper_id == id) return &r;
  return nullptr;
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir,
                        const std::string& source_name) {
  Manifest m;
  std::set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    const auto fail = [&](const std::string& msg) { throw ParseError(source_name, line_no, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() < 3 || cols.size() > 4) fail(fmt::format("expected 3 or 4 tab-separated fields, got {}", cols.size()));

    auto id = PaperId::parse(trim(cols[0]));
    if (!id) fail(fmt::format("bad paper id '{}'", cols[0]));
    const auto year = parse_int(trim(cols[1]));
    const auto month = parse_int(trim(cols[2]));
    if (!year || *year < 1991 || *year > 2099) fail(fmt::format("bad year '{}'", cols[1]));
    if (!month || *month < 1 || *month > 12) fail(fmt::format("bad month '{}'", cols[2]));
    if (*year != id->year() || *month != id->month())
      fail(fmt::format("year/month {}-{} disagree with id {}", *year, *month, id->value()));
    if (!seen.insert(id->value()).second) fail(fmt::format("duplicate paper id {}", id->value()));

    DocumentRecord rec{*id, *year, *month, {}};
    if (cols.size() == 4 && !trim(cols[3]).empty()) {
      for (auto entry : split(cols[3], ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos) fail(fmt::format("file entry '{}' lacks format=", entry));
        const auto fmt_kind = parse_format(trim(entry.substr(0, eq)));
        if (!fmt_kind) fail(fmt::format("unknown format '{}'", entry.substr(0, eq)));
        const auto raw_path = trim(entry.substr(eq + 1));
        if (raw_path.empty()) fail("empty file path");
        std::filesystem::path p(unescape_field(raw_path));
        if (p.is_relative()) p = base_dir / p;
        auto& list = rec.files[*fmt_kind];
        if (!list.empty() && *fmt_kind != FormatKind::Latex)
          fail(fmt::format("format {} listed twice", format_token(*fmt_kind)));
        list.push_back(std::move(p));
      }
    }
    m.records.push_back(std::move(rec));
  });
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_manifest(read_file(path), base, path.string());
}

std::string format_manifest(const Manifest& manifest) {
  std::string out;
  for (const auto& r : manifest.records) {
    out += fmt::format("{}\t{}\t{}\t", r.paper_id.value(), r.year, r.month);
    bool first = true;
    for (const auto& [f, paths] : r.files) {
      for (const auto& p : paths) {
        if (!first) out.push_back(';');
        first = false;
        std::string escaped = escape_field(p.string());
        // ';' separates entries, so it must not appear raw in a path
        std::string safe;
        for (char c : escaped) {
          if (c == ';') safe += "%3B";
          else safe.push_back(c);
        }
        out += fmt::format("{}={}", format_token(f), safe);
      }
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

// Partial Fisher-Yates over the pre-sorted population; returns k picks in draw order.
std::vector<const DocumentRecord*> draw_without_replacement(
    std::vector<const DocumentRecord*> pool, std::size_t k, Stream& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

std::map<int, std::vector<const DocumentRecord*>> population_by_year(const Manifest& manifest) {
  std::map<int, std::vector<const DocumentRecord*>> by_year;
  for (const auto& r : manifest.records) by_year[r.year].push_back(&r);
  for (auto& [year, pop] : by_year)
    std::sort(pop.begin(), pop.end(),
              [](const auto* a, const auto* b) { return a->paper_id < b->paper_id; });
  return by_year;
}

Manifest stratified_sample(const Manifest& manifest, std::size_t per_stratum,
                           std::uint64_t seed) {
  if (per_stratum == 0) throw Error("per_stratum must be >= 1");
  std::map<std::pair<int, int>, std::vector<const DocumentRecord*>> strata;
  for (const auto& r : manifest.records) strata[{r.year, r.month}].push_back(&r);

  Manifest out;
  for (auto& [key, pop] : strata) {
    std::sort(pop.begin(), pop.end(),
              [](const auto* a, const auto* b) { return a->paper_id < b->paper_id; });
    Stream rng(seed, fmt::format("stratum/{:04d}-{:02d}", key.first, key.second));
    for (const auto* r : draw_without_replacement(std::move(pop), per_stratum, rng))
      out.records.push_back(*r);
  }
  return out;
}

std::map<int, Manifest> sample_per_year(const Manifest& manifest, std::size_t n,
                                        std::uint64_t seed) {
  if (n == 0) throw Error("sample size must be >= 1");
  std::map<int, Manifest> out;
  for (auto& [year, pop] : population_by_year(manifest)) {
    Stream rng(seed, fmt::format("year/{:04d}", year));
    auto& m = out[year];
    for (const auto* r : draw_without_replacement(std::move(pop), n, rng)) m.records.push_back(*r);
  }
  return out;
}

}  // namespace urlx
