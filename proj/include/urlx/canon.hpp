#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "urlx/corpus.hpp"
#include "urlx/extract.hpp"

namespace urlx {

/// Normal form used for every set operation and every match.
///
/// value = scheme "://" authority rest, where the scheme and the host part of
/// the authority are lowercase and everything else is byte-preserved. Two
/// URLs are the same resource iff their values are equal; there is no
/// `www.` folding, no http/https folding and no percent-decoding.
class CanonicalUrl {
 public:
  const std::string& value() const { return value_; }
  const std::string& scheme() const { return scheme_; }
  const std::string& host() const { return host_; }
  /// Path component (after the authority, before '?' or '#').
  std::string_view path() const;

  friend bool operator==(const CanonicalUrl& a, const CanonicalUrl& b) { return a.value_ == b.value_; }
  friend auto operator<=>(const CanonicalUrl& a, const CanonicalUrl& b) { return a.value_ <=> b.value_; }

 private:
  friend std::optional<CanonicalUrl> canonicalize(std::string_view raw);
  std::string value_;
  std::string scheme_;
  std::string host_;
  std::size_t path_begin_ = 0;
};

/// Characters stripped from the end of a URL iteratively: . , ; : ! ? ' "
inline constexpr std::string_view kTrimSet = ".,;:!?'\"";

/// Normalizes a raw candidate, or rejects it (nullopt) when no `scheme://host`
/// survives or the raw text holds whitespace or control bytes. Closing ) ] }
/// are stripped only while unbalanced in the URL.
std::optional<CanonicalUrl> canonicalize(std::string_view raw);

/// Whether url points at paper_id's own arXiv page (abs, pdf, format, html).
bool is_self_reference(const CanonicalUrl& url, const PaperId& paper_id);

std::set<CanonicalUrl> filter_self_refs(const std::set<CanonicalUrl>& urls, const PaperId& paper_id);

/// Deduplicated canonical URLs of one paper for one or more formats.
struct ExtractionSet {
  PaperId paper_id;
  FormatSet formats;
  std::set<CanonicalUrl> urls;
};

/// canonicalize -> filter_self_refs -> dedup. Candidates of other formats or
/// papers are ignored.
ExtractionSet build_format_set(std::span<const UrlCandidate> candidates, FormatKind format,
                               const PaperId& paper_id);

/// Groups mixed candidates by (paper, format) and builds every set.
std::vector<ExtractionSet> build_format_sets(std::span<const UrlCandidate> candidates);

/// Line-delimited records: paper_id TAB formats(comma-joined) TAB url.
/// Sets are emitted in (paper_id, formats) order, URLs sorted.
std::string format_extraction_sets(std::span<const ExtractionSet> sets);
/// Rows are grouped back into sets by (paper_id, formats). Every url is
/// re-canonicalized; a url that is not already canonical is an error.
std::vector<ExtractionSet> parse_extraction_sets(std::string_view text,
                                                 const std::string& source_name = "<sets>");

}  // namespace urlx
