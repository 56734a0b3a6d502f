#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urlx {

/// The four derived formats URLs are extracted from. PDF is deliberately
/// absent: its content only arrives through the Text/TeiXml conversions and
/// the human ground truth.
enum class FormatKind : std::uint8_t { Text = 0, Latex = 1, Html = 2, TeiXml = 3 };

inline constexpr std::array<FormatKind, 4> kAllFormats = {
    FormatKind::Text, FormatKind::Latex, FormatKind::Html, FormatKind::TeiXml};

/// Lowercase token used in files and flags: text, latex, html, teixml.
std::string_view format_token(FormatKind f);
/// Label used in report tables: Text, LaTeX, HTML, XML.
std::string_view format_label(FormatKind f);
std::optional<FormatKind> parse_format(std::string_view token);

/// Subset of the four formats, stored as a bitmask in format order.
class FormatSet {
 public:
  constexpr FormatSet() = default;
  constexpr FormatSet(std::initializer_list<FormatKind> fs) {
    for (auto f : fs) insert(f);
  }
  static constexpr FormatSet from_bits(std::uint8_t bits) {
    FormatSet s;
    s.bits_ = bits & 0x0f;
    return s;
  }

  constexpr void insert(FormatKind f) { bits_ |= bit(f); }
  constexpr bool contains(FormatKind f) const { return (bits_ & bit(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(static_cast<unsigned>(bits_)));
  }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool is_subset_of(FormatSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<FormatKind> members() const;
  /// "text,latex" style, formats in fixed order.
  std::string tokens(char sep = ',') const;
  /// "LaTeX + HTML + XML" style, as in report tables.
  std::string label() const;
  /// Accepts tokens separated by ',' or '+'. Unknown tokens return nullopt.
  static std::optional<FormatSet> parse(std::string_view text);

  friend constexpr bool operator==(FormatSet, FormatSet) = default;
  friend constexpr auto operator<=>(FormatSet a, FormatSet b) { return a.bits_ <=> b.bits_; }

 private:
  static constexpr std::uint8_t bit(FormatKind f) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
  }
  std::uint8_t bits_ = 0;
};

/// arXiv identifier: old style `archive[.SC]/YYMMNNN` or new style
/// `YYMM.NNNN[N]`. No version suffix.
class PaperId {
 public:
  static std::optional<PaperId> parse(std::string_view text);
  /// Throws urlx::Error when text is not an identifier.
  static PaperId from(std::string_view text);

  const std::string& value() const { return value_; }
  bool old_style() const { return old_style_; }
  /// Four-digit year from the YYMM component; 91..99 map to the 1900s.
  int year() const { return year_; }
  int month() const { return month_; }

  friend bool operator==(const PaperId& a, const PaperId& b) { return a.value_ == b.value_; }
  friend auto operator<=>(const PaperId& a, const PaperId& b) { return a.value_ <=> b.value_; }

 private:
  std::string value_;
  bool old_style_ = false;
  int year_ = 0;
  int month_ = 0;
};

struct DocumentRecord {
  PaperId paper_id;
  int year = 0;
  int month = 0;
  std::map<FormatKind, std::vector<std::filesystem::path>> files;

  const std::vector<std::filesystem::path>& paths(FormatKind f) const;
  bool has(FormatKind f) const { return !paths(f).empty(); }
};

struct Manifest {
  std::vector<DocumentRecord> records;

  const DocumentRecord* find(const PaperId& id) const;
  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

/// Parses manifest text. Relative paths are resolved against base_dir.
/// Throws ParseError (with line number) on malformed rows or duplicate ids.
Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir,
                        const std::string& source_name = "<manifest>");
Manifest load_manifest(const std::filesystem::path& path);
/// Writes the manifest text form; parse_manifest reads it back.
std::string format_manifest(const Manifest& manifest);

/// min(per_stratum, |stratum|) records from every (year, month) stratum,
/// uniformly without replacement. Output is ordered by stratum, then by draw.
Manifest stratified_sample(const Manifest& manifest, std::size_t per_stratum,
                           std::uint64_t seed);

/// min(n, |year|) distinct records per year, uniformly without replacement.
std::map<int, Manifest> sample_per_year(const Manifest& manifest, std::size_t n,
                                        std::uint64_t seed);

/// Records grouped by year, each group sorted by paper_id. Shared by the
/// samplers so draws are independent of manifest row order.
std::map<int, std::vector<const DocumentRecord*>> population_by_year(const Manifest& manifest);

}  // namespace urlx
