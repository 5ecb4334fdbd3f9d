#pragma once

#include <cmath>
#include <cstdint>

namespace vital {

/// num / den rounded half away from zero; den > 0.
constexpr std::int64_t round_half_away(std::int64_t num, std::int64_t den) {
  const std::int64_t mag = num < 0 ? -num : num;
  const std::int64_t q = (2 * mag + den) / (2 * den);
  return num < 0 ? -q : q;
}

inline std::int64_t round_half_away(double value) {
  return static_cast<std::int64_t>(std::round(value));  // std::round is half-away
}

}  // namespace vital
