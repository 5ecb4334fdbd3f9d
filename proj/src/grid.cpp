#include "vital/grid.hpp"

#include <algorithm>

#include "vital/error.hpp"

namespace vital {

WindowGrid::WindowGrid(int interval_minutes)
    : interval_minutes_(interval_minutes) {
  if (interval_minutes <= 0 || kMinutesPerDay % interval_minutes != 0) {
    throw Error(ErrorCode::invalid_config,
                "interval must be a positive divisor of 1440 minutes, got " +
                    std::to_string(interval_minutes));
  }
}

LocalTimestamp align_to_window(LocalTimestamp ts, const WindowGrid& grid) {
  return grid.window_start(grid.window_index(ts));
}

std::vector<WindowOverlap> overlap_decomposition(LocalTimestamp start,
                                                 LocalTimestamp end,
                                                 const WindowGrid& grid) {
  if (!(start < end)) {
    throw Error(ErrorCode::degenerate_span,
                "span [" + start.to_string() + ", " + end.to_string() +
                    ") is empty");
  }
  const std::int64_t step = grid.interval_seconds();
  const std::int64_t first = grid.window_index(start);
  // end is exclusive, so the last touched window holds end - 1s.
  const std::int64_t last = floor_div(end.seconds() - 1, step);

  std::vector<WindowOverlap> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t k = first; k <= last; ++k) {
    const std::int64_t lo = std::max(start.seconds(), k * step);
    const std::int64_t hi = std::min(end.seconds(), (k + 1) * step);
    out.push_back({grid.window_start(k), hi - lo});
  }
  return out;
}

}  // namespace vital
