#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vital/grid.hpp"
#include "vital/items.hpp"
#include "vital/timestamp.hpp"

namespace vital {

/// Frame columns that carry their own provenance. The sleep stage shares the
/// sleep column's source.
enum class FrameItem { steps, activity, exercise, heart_rate, spo2, sleep };

inline constexpr std::size_t kFrameItemCount = 6;
inline constexpr std::array<FrameItem, kFrameItemCount> kAllFrameItems = {
    FrameItem::steps,      FrameItem::activity, FrameItem::exercise,
    FrameItem::heart_rate, FrameItem::spo2,     FrameItem::sleep};

/// Canonical CSV column name of the frame item.
std::string_view column_name(FrameItem item);
std::optional<FrameItem> parse_frame_item(std::string_view column);
/// Frame column fed by a raw item kind (sleep_stage feeds sleep).
FrameItem frame_item_for(ItemKind item);

constexpr std::size_t index_of(FrameItem item) {
  return static_cast<std::size_t>(item);
}

struct CanonicalFrame {
  LocalTimestamp window_start;
  std::optional<std::int64_t> steps;
  std::optional<int> activity_minutes;
  std::optional<int> exercise_minutes;
  std::optional<int> heart_rate_bpm;
  std::optional<int> spo2_percent;
  std::optional<int> sleep_minutes;
  std::optional<SleepStage> sleep_stage;
  std::array<std::optional<VendorKind>, kFrameItemCount> sources{};
  int heart_rate_samples = 0;
  int spo2_samples = 0;

  bool has(FrameItem item) const;
  bool empty() const;
  std::optional<VendorKind> source(FrameItem item) const {
    return sources[index_of(item)];
  }

  friend bool operator==(const CanonicalFrame&, const CanonicalFrame&) =
      default;
};

/// Throws invariant-violation describing the first broken frame rule.
void validate_frame(const CanonicalFrame& frame, const WindowGrid& grid);

struct CollectionSpan {
  Date first;
  Date last;

  friend bool operator==(const CollectionSpan&, const CollectionSpan&) =
      default;
};

/// Day-level sleep stage minutes from vendors that only export daily totals.
struct DayStageTotal {
  Date date;
  VendorKind vendor = VendorKind::xiaomi;
  SleepStage stage = SleepStage::light;
  int minutes = 0;

  friend bool operator==(const DayStageTotal&, const DayStageTotal&) = default;
};

struct Dataset {
  std::string dataset_id;
  std::string timezone;
  WindowGrid grid;
  std::vector<CanonicalFrame> frames;  // strictly ascending by window_start
  std::vector<DayStageTotal> day_stage_totals;  // sorted by (date, vendor, stage)

  /// First/last dates holding a non-empty frame; nullopt for no frames.
  std::optional<CollectionSpan> collection_span() const;

  /// Frames whose window_start falls on `date`.
  std::span<const CanonicalFrame> frames_on(Date date) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Checks sort order, uniqueness, and every frame invariant.
void validate_dataset(const Dataset& dataset);

struct DailySummary {
  Date date;
  std::int64_t total_steps = 0;
  std::int64_t total_sleep_minutes = 0;
  std::int64_t total_activity_minutes = 0;
  std::int64_t total_exercise_minutes = 0;
  std::optional<int> mean_heart_rate_bpm;
  std::optional<int> mean_spo2_percent;
  int wear_minutes = 0;
  int nonempty_windows = 0;
  /// Daily-aggregated stage minutes (vendors without window-level stages).
  std::array<std::optional<int>, 4> day_level_stage_minutes{};

  friend bool operator==(const DailySummary&, const DailySummary&) = default;
};

}  // namespace vital
