#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace urlx {

/// Whole-file read in binary mode. Throws urlx::Error if unreadable.
std::string read_file(const std::filesystem::path& path);
/// Writes (truncating) and throws urlx::Error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Calls fn(line_number, line) for each line, with the LF and any trailing
/// CR removed. Line numbers are 1-based.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line_no, line);
    pos = end + 1;
  }
}

/// Percent-escapes '%', TAB, CR and LF so a value fits in one TSV field.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

}  // namespace urlx
