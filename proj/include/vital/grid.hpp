#pragma once

#include <cstdint>
#include <vector>

#include "vital/timestamp.hpp"

namespace vital {

/// Fixed wall-clock window grid. Window k of a day covers
/// [k * interval, (k + 1) * interval), half-open.
class WindowGrid {
 public:
  static constexpr int kDefaultIntervalMinutes = 10;

  WindowGrid() = default;
  /// Throws invalid-config unless interval_minutes divides 1440.
  explicit WindowGrid(int interval_minutes);

  int interval_minutes() const { return interval_minutes_; }
  std::int64_t interval_seconds() const {
    return std::int64_t{interval_minutes_} * kSecondsPerMinute;
  }
  int windows_per_day() const {
    return static_cast<int>(kMinutesPerDay / interval_minutes_);
  }

  /// Absolute window number (window start seconds / interval seconds).
  std::int64_t window_index(LocalTimestamp ts) const {
    return floor_div(ts.seconds(), interval_seconds());
  }
  LocalTimestamp window_start(std::int64_t index) const {
    return LocalTimestamp::from_seconds(index * interval_seconds());
  }

  friend bool operator==(const WindowGrid&, const WindowGrid&) = default;

 private:
  int interval_minutes_ = kDefaultIntervalMinutes;
};

struct WindowOverlap {
  LocalTimestamp window_start;
  std::int64_t overlap_seconds = 0;

  friend bool operator==(const WindowOverlap&, const WindowOverlap&) = default;
};

LocalTimestamp align_to_window(LocalTimestamp ts, const WindowGrid& grid);

/// Splits [start, end) into per-window overlaps in ascending order.
/// Throws degenerate-span when start >= end.
std::vector<WindowOverlap> overlap_decomposition(LocalTimestamp start,
                                                 LocalTimestamp end,
                                                 const WindowGrid& grid);

}  // namespace vital
