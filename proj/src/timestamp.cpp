#include "vital/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace vital {

namespace {

// Reads exactly `width` ASCII digits starting at `pos`.
bool read_fixed(std::string_view text, std::size_t pos, std::size_t width,
                int& out) {
  if (pos + width > text.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc{} && ptr == text.data() + pos + width;
}

}  // namespace

bool is_valid_civil_date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  return ymd.ok();
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  return Date(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::optional<Date> Date::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!read_fixed(text, 0, 4, y) || !read_fixed(text, 5, 2, m) ||
      !read_fixed(text, 8, 2, d)) {
    return std::nullopt;
  }
  if (!is_valid_civil_date(y, static_cast<unsigned>(m),
                           static_cast<unsigned>(d))) {
    return std::nullopt;
  }
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

LocalTimestamp LocalTimestamp::from_parts(int year, unsigned month,
                                          unsigned day, int hour, int minute,
                                          int second) {
  const Date d = Date::from_ymd(year, month, day);
  return LocalTimestamp(d.days() * kSecondsPerDay + hour * 3600 +
                        minute * 60 + second);
}

std::optional<LocalTimestamp> LocalTimestamp::parse(std::string_view text) {
  if (text.size() != 19 || text[10] != ' ' || text[13] != ':' ||
      text[16] != ':') {
    return std::nullopt;
  }
  const auto date = Date::parse(text.substr(0, 10));
  int h = 0, mi = 0, s = 0;
  if (!date || !read_fixed(text, 11, 2, h) || !read_fixed(text, 14, 2, mi) ||
      !read_fixed(text, 17, 2, s)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  return LocalTimestamp(date->days() * kSecondsPerDay + h * 3600 + mi * 60 + s);
}

Date LocalTimestamp::date() const {
  return Date::from_days(floor_div(seconds_, kSecondsPerDay));
}

std::int64_t LocalTimestamp::seconds_of_day() const {
  return seconds_ - floor_div(seconds_, kSecondsPerDay) * kSecondsPerDay;
}

CivilTime LocalTimestamp::to_civil() const {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{date().days()}}};
  const std::int64_t sod = seconds_of_day();
  return CivilTime{static_cast<int>(ymd.year()),
                   static_cast<unsigned>(ymd.month()),
                   static_cast<unsigned>(ymd.day()),
                   static_cast<int>(sod / 3600),
                   static_cast<int>(sod / 60 % 60),
                   static_cast<int>(sod % 60)};
}

std::string LocalTimestamp::to_string() const {
  const std::int64_t sod = seconds_of_day();
  char buf[16];
  std::snprintf(buf, sizeof buf, " %02d:%02d:%02d",
                static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                static_cast<int>(sod % 60));
  return date().to_string() + buf;
}

}  // namespace vital
