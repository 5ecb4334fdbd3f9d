#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vital {

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes; surrounding whitespace outside quotes is kept.
std::vector<std::string> split_csv_line(std::string_view line);

/// Iterates lines of `text`, stripping a trailing '\r' from each.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line);
  /// 1-based number of the line last returned by next().
  int line_number() const { return line_number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_number_ = 0;
};

/// True when `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace vital
