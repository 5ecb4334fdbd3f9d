#include "vital/frame.hpp"

#include <algorithm>

#include "vital/error.hpp"

namespace vital {

std::string_view column_name(FrameItem item) {
  switch (item) {
    case FrameItem::steps: return "steps";
    case FrameItem::activity: return "activity_min";
    case FrameItem::exercise: return "exercise_min";
    case FrameItem::heart_rate: return "heart_rate_bpm";
    case FrameItem::spo2: return "spo2_pct";
    case FrameItem::sleep: return "sleep_min";
  }
  return "?";
}

std::optional<FrameItem> parse_frame_item(std::string_view column) {
  for (FrameItem item : kAllFrameItems) {
    if (column_name(item) == column) return item;
  }
  return std::nullopt;
}

FrameItem frame_item_for(ItemKind item) {
  switch (item) {
    case ItemKind::steps: return FrameItem::steps;
    case ItemKind::activity_duration: return FrameItem::activity;
    case ItemKind::exercise_duration: return FrameItem::exercise;
    case ItemKind::heart_rate: return FrameItem::heart_rate;
    case ItemKind::oxygen_saturation: return FrameItem::spo2;
    case ItemKind::sleep_duration:
    case ItemKind::sleep_stage: return FrameItem::sleep;
  }
  return FrameItem::steps;
}

bool CanonicalFrame::has(FrameItem item) const {
  switch (item) {
    case FrameItem::steps: return steps.has_value();
    case FrameItem::activity: return activity_minutes.has_value();
    case FrameItem::exercise: return exercise_minutes.has_value();
    case FrameItem::heart_rate: return heart_rate_bpm.has_value();
    case FrameItem::spo2: return spo2_percent.has_value();
    case FrameItem::sleep: return sleep_minutes.has_value();
  }
  return false;
}

bool CanonicalFrame::empty() const {
  return std::none_of(kAllFrameItems.begin(), kAllFrameItems.end(),
                      [this](FrameItem item) { return has(item); });
}

namespace {

[[noreturn]] void violation(const CanonicalFrame& frame,
                            const std::string& what) {
  throw Error(ErrorCode::invariant_violation,
              "frame " + frame.window_start.to_string() + ": " + what);
}

void check_duration(const CanonicalFrame& frame, const std::optional<int>& v,
                    const WindowGrid& grid, std::string_view name) {
  if (v && (*v < 0 || *v > grid.interval_minutes())) {
    violation(frame, std::string(name) + " outside 0.." +
                         std::to_string(grid.interval_minutes()));
  }
}

}  // namespace

void validate_frame(const CanonicalFrame& frame, const WindowGrid& grid) {
  if (frame.window_start.seconds() % grid.interval_seconds() != 0) {
    violation(frame, "window_start not aligned to the grid");
  }
  if (frame.steps && *frame.steps < 0) violation(frame, "negative steps");
  check_duration(frame, frame.activity_minutes, grid, "activity_min");
  check_duration(frame, frame.exercise_minutes, grid, "exercise_min");
  check_duration(frame, frame.sleep_minutes, grid, "sleep_min");
  if (frame.heart_rate_bpm && *frame.heart_rate_bpm <= 0) {
    violation(frame, "heart rate must be positive");
  }
  if (frame.spo2_percent &&
      (*frame.spo2_percent < 0 || *frame.spo2_percent > 100)) {
    violation(frame, "spo2 outside 0..100");
  }
  if (frame.sleep_stage && !(frame.sleep_minutes && *frame.sleep_minutes > 0)) {
    violation(frame, "sleep_stage requires sleep_min > 0");
  }
  for (FrameItem item : kAllFrameItems) {
    if (frame.has(item) != frame.source(item).has_value()) {
      violation(frame, "column " + std::string(column_name(item)) +
                           " must have exactly one source when present");
    }
  }
}

std::optional<CollectionSpan> Dataset::collection_span() const {
  if (frames.empty()) return std::nullopt;
  return CollectionSpan{frames.front().window_start.date(),
                        frames.back().window_start.date()};
}

std::span<const CanonicalFrame> Dataset::frames_on(Date date) const {
  const LocalTimestamp lo = LocalTimestamp::start_of(date);
  const LocalTimestamp hi = LocalTimestamp::start_of(date.next());
  auto by_start = [](const CanonicalFrame& f, LocalTimestamp t) {
    return f.window_start < t;
  };
  auto first = std::lower_bound(frames.begin(), frames.end(), lo, by_start);
  auto last = std::lower_bound(first, frames.end(), hi, by_start);
  return {first, last};
}

void validate_dataset(const Dataset& dataset) {
  for (std::size_t i = 0; i < dataset.frames.size(); ++i) {
    const CanonicalFrame& frame = dataset.frames[i];
    validate_frame(frame, dataset.grid);
    if (frame.empty()) violation(frame, "empty frames are not materialized");
    if (i > 0 && !(dataset.frames[i - 1].window_start < frame.window_start)) {
      violation(frame, "frames not strictly ascending");
    }
  }
}

}  // namespace vital
