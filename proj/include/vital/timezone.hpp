#pragma once

#include <string>
#include <string_view>

namespace vital {

/// Dataset reference timezone. Only fixed offsets are modelled: `UTC`,
/// `UTC+9`, `UTC-05:30`, `+0900`, `+09:00`, or one of a few IANA names whose
/// offset has no daylight-saving rule (e.g. `Asia/Seoul`).
class TimeZone {
 public:
  TimeZone() = default;

  /// Throws invalid-config for unrecognized zone text.
  static TimeZone parse(std::string_view text);
  static TimeZone utc() { return TimeZone("UTC", 0); }

  const std::string& name() const { return name_; }
  int offset_seconds() const { return offset_seconds_; }

  friend bool operator==(const TimeZone&, const TimeZone&) = default;

 private:
  TimeZone(std::string name, int offset) : name_(std::move(name)), offset_seconds_(offset) {}

  std::string name_ = "UTC";
  int offset_seconds_ = 0;
};

/// Parses `+HHMM`, `+HH:MM`, `+HH`, `-...`; returns false on malformed text.
bool parse_utc_offset(std::string_view text, int& offset_seconds);

/// Renders an offset as `+HHMM`.
std::string format_utc_offset(int offset_seconds);

}  // namespace vital
