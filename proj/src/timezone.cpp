#include "vital/timezone.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <utility>

#include "vital/error.hpp"

namespace vital {

namespace {

constexpr std::array<std::pair<std::string_view, int>, 12> kFixedZones = {{
    {"UTC", 0},
    {"Etc/UTC", 0},
    {"GMT", 0},
    {"Asia/Seoul", 9 * 3600},
    {"Asia/Tokyo", 9 * 3600},
    {"Asia/Shanghai", 8 * 3600},
    {"Asia/Singapore", 8 * 3600},
    {"Asia/Hong_Kong", 8 * 3600},
    {"Asia/Taipei", 8 * 3600},
    {"Asia/Kolkata", 5 * 3600 + 1800},
    {"Asia/Dubai", 4 * 3600},
    {"Asia/Jakarta", 7 * 3600},
}};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

bool parse_utc_offset(std::string_view text, int& offset_seconds) {
  if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) return false;
  const int sign = text[0] == '-' ? -1 : 1;
  std::string_view rest = text.substr(1);
  std::string_view hh, mm = "00";
  if (rest.size() == 5 && rest[2] == ':') {
    hh = rest.substr(0, 2);
    mm = rest.substr(3, 2);
  } else if (rest.size() == 4) {
    hh = rest.substr(0, 2);
    mm = rest.substr(2, 2);
  } else if (rest.size() <= 2) {
    hh = rest;
  } else {
    return false;
  }
  if (!all_digits(hh) || !all_digits(mm)) return false;
  const int h = std::stoi(std::string(hh));
  const int m = std::stoi(std::string(mm));
  if (h > 14 || m > 59) return false;
  offset_seconds = sign * (h * 3600 + m * 60);
  return true;
}

std::string format_utc_offset(int offset_seconds) {
  const char sign = offset_seconds < 0 ? '-' : '+';
  const int mag = offset_seconds < 0 ? -offset_seconds : offset_seconds;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%02d%02d", sign, mag / 3600,
                mag / 60 % 60);
  return buf;
}

TimeZone TimeZone::parse(std::string_view text) {
  for (const auto& [name, offset] : kFixedZones) {
    if (name == text) return TimeZone(std::string(text), offset);
  }
  int offset = 0;
  std::string_view body = text;
  if (body.substr(0, 3) == "UTC" || body.substr(0, 3) == "GMT") {
    body.remove_prefix(3);
  }
  if (parse_utc_offset(body, offset)) return TimeZone(std::string(text), offset);
  throw Error(ErrorCode::invalid_config,
              "unsupported timezone '" + std::string(text) +
                  "' (use UTC, UTC+9, +09:00 or a fixed-offset zone name)");
}

}  // namespace vital
