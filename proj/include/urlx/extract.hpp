#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "urlx/corpus.hpp"
#include "urlx/error.hpp"

namespace urlx {

enum class ExtractionRule : std::uint8_t { RegexBody, UrlMacro, UrlAddrMacro, AnchorHref, TargetAttr };

std::string_view rule_token(ExtractionRule r);
std::optional<ExtractionRule> parse_rule(std::string_view token);
/// Whether a rule may be produced by the extractor for `format`.
bool rule_allowed(ExtractionRule rule, FormatKind format);

/// One raw match, exactly as found in the source file.
struct UrlCandidate {
  std::string raw;
  PaperId paper_id;
  FormatKind format = FormatKind::Text;
  std::filesystem::path file;
  std::size_t byte_offset = 0;
  ExtractionRule rule = ExtractionRule::RegexBody;

  friend bool operator==(const UrlCandidate&, const UrlCandidate&) = default;
};

enum class WrapRepair : std::uint8_t { None, Conservative };
std::optional<WrapRepair> parse_wrap_repair(std::string_view token);

/// Non-fatal problem found while extracting (e.g. an unbalanced `\url{`).
struct Diagnostic {
  std::filesystem::path file;
  std::size_t byte_offset = 0;
  std::string message;
};

/// TEI input that is not well-formed XML. Fatal for that one document.
class XmlError : public Error {
 public:
  XmlError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// URL token grammar: (https?|ftp)://[A-Za-z0-9\-._~:/?#\[\]@!$&'()*+,;=%]+
bool is_url_char(char c);
/// Length of the accepted scheme plus "://" at the start of s (case-insensitive), or 0.
std::size_t scheme_prefix_length(std::string_view s);
bool has_accepted_scheme(std::string_view s);

/// Regex-style token scan of plain text, in byte_offset order.
std::vector<UrlCandidate> extract_from_text(std::string_view content, const PaperId& paper_id,
                                            WrapRepair wrap_repair = WrapRepair::Conservative,
                                            const std::filesystem::path& file = {});

struct SourceFile {
  std::filesystem::path path;
  std::string_view content;
};

struct LatexExtraction {
  std::vector<UrlCandidate> candidates;
  std::vector<Diagnostic> warnings;
};

/// Macro captures (`\url`, `\urladdr`, first argument of `\href`) plus a
/// token scan of the remaining comment-stripped source. Files are processed
/// in the given order; within a file candidates are in byte_offset order.
LatexExtraction extract_from_latex(std::span<const SourceFile> files, const PaperId& paper_id);

/// `href` values of `<a>` elements. Tolerates malformed markup.
std::vector<UrlCandidate> extract_from_html(std::string_view content, const PaperId& paper_id,
                                            const std::filesystem::path& file = {});

/// `target` attribute values on any element. Throws XmlError if the input
/// is not well-formed.
std::vector<UrlCandidate> extract_from_tei(std::string_view content, const PaperId& paper_id,
                                           const std::filesystem::path& file = {});

/// Everything extracted from one manifest record.
struct DocumentExtraction {
  PaperId paper_id;
  FormatSet attempted;
  std::vector<UrlCandidate> candidates;
  std::vector<Diagnostic> warnings;
  /// Formats whose extraction failed outright, with the reason.
  std::map<FormatKind, std::string> failures;
};

/// Reads the record's files for the selected formats and runs the matching
/// extractors. I/O and XML errors are recorded in `failures`, never thrown.
DocumentExtraction extract_document(const DocumentRecord& record, FormatSet formats,
                                    WrapRepair wrap_repair);

/// Order used for every cross-document emission.
void sort_candidates(std::vector<UrlCandidate>& candidates);

/// Line-delimited candidate records:
/// paper_id TAB format TAB rule TAB file TAB byte_offset TAB raw.
std::string format_candidates(std::span<const UrlCandidate> candidates);
std::vector<UrlCandidate> parse_candidates(std::string_view text,
                                           const std::string& source_name = "<candidates>");

}  // namespace urlx
