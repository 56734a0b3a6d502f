#pragma once

// Internal helpers shared by the HTML and TEI extractors.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urlx::markup {

/// Appends the UTF-8 encoding of cp.
void append_utf8(std::string& out, char32_t cp);

/// Decodes one reference starting at s[0] == '&'. On success returns the
/// decoded text and sets consumed to the reference length (including ';').
/// Only the five XML entities are known when html_names is false.
std::optional<std::string> decode_reference(std::string_view s, bool html_names,
                                            std::size_t& consumed);

/// Decodes all references; unknown or malformed ones are kept verbatim.
std::string decode_entities_lenient(std::string_view s);

struct Attribute {
  std::string_view name;
  std::string value;          // entity-decoded
  std::size_t value_offset;   // offset of the raw value in the document
};

/// Strict, non-validating well-formedness scanner. Invokes on_element for
/// every start or empty-element tag in document order. Throws XmlError.
void scan_xml(std::string_view doc,
              const std::function<void(std::string_view name, const std::vector<Attribute>&)>& on_element);

}  // namespace urlx::markup
