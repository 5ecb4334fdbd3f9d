#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vital {

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kMinutesPerDay = 1440;

struct CivilTime {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
};

/// Calendar date, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  static constexpr Date from_days(std::int64_t days) { return Date(days); }
  static Date from_ymd(int year, unsigned month, unsigned day);

  /// Parses `YYYY-MM-DD`; returns nullopt on any deviation.
  static std::optional<Date> parse(std::string_view text);

  constexpr std::int64_t days() const { return days_; }
  std::string to_string() const;

  Date next() const { return Date(days_ + 1); }
  Date prev() const { return Date(days_ - 1); }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  constexpr explicit Date(std::int64_t days) : days_(days) {}
  std::int64_t days_ = 0;
};

/// Naive wall-clock timestamp at second precision in the dataset timezone.
/// Stored as seconds since 1970-01-01 00:00:00 of that wall clock.
class LocalTimestamp {
 public:
  constexpr LocalTimestamp() = default;
  static constexpr LocalTimestamp from_seconds(std::int64_t s) {
    return LocalTimestamp(s);
  }
  static LocalTimestamp from_parts(int year, unsigned month, unsigned day,
                                   int hour, int minute, int second);
  static LocalTimestamp start_of(Date d) {
    return LocalTimestamp(d.days() * kSecondsPerDay);
  }

  /// Parses the canonical `YYYY-MM-DD HH:MM:SS` form exactly.
  static std::optional<LocalTimestamp> parse(std::string_view text);

  constexpr std::int64_t seconds() const { return seconds_; }
  Date date() const;
  /// Seconds elapsed since the start of this timestamp's calendar day.
  std::int64_t seconds_of_day() const;

  CivilTime to_civil() const;

  /// Canonical `YYYY-MM-DD HH:MM:SS` rendering.
  std::string to_string() const;

  LocalTimestamp plus_seconds(std::int64_t s) const {
    return LocalTimestamp(seconds_ + s);
  }

  friend constexpr auto operator<=>(const LocalTimestamp&,
                                    const LocalTimestamp&) = default;

 private:
  constexpr explicit LocalTimestamp(std::int64_t s) : seconds_(s) {}
  std::int64_t seconds_ = 0;
};

// Floor division for possibly negative numerators (pre-1970 timestamps).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool is_valid_civil_date(int year, unsigned month, unsigned day);

}  // namespace vital
