#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vital/adapters.hpp"
#include "vital/frame.hpp"
#include "vital/grid.hpp"

namespace vital {

/// Share of one record's quantity assigned to one window. `amount` is a step
/// count for steps and seconds for duration items.
struct Allocation {
  LocalTimestamp window_start;
  ItemKind item = ItemKind::steps;
  std::int64_t amount = 0;
  VendorKind vendor = VendorKind::samsung;
  std::size_t origin = 0;  // index of the source record

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct MergePolicy {
  std::vector<VendorKind> vendor_priority = {
      VendorKind::samsung, VendorKind::apple, VendorKind::fitbit,
      VendorKind::xiaomi};
  std::map<FrameItem, std::vector<VendorKind>> overrides;

  const std::vector<VendorKind>& priority_for(FrameItem item) const;
  /// Throws invalid-config unless every list is a permutation of the vendors.
  void validate() const;
};

/// Integer apportionment of `quantity` proportional to `weights`: floors of
/// the exact shares, leftover units to the largest remainders (earlier index
/// wins ties). The result sums to `quantity` exactly.
std::vector<std::int64_t> largest_remainder(std::int64_t quantity,
                                            std::span<const std::int64_t> weights);

/// Splits a span record over its decomposition. Steps are apportioned with
/// largest_remainder; durations allocate the overlap seconds. Exercise
/// records yield both their seconds and, when reported, their steps.
/// Throws internal-consistency when the decomposition is not a partition of
/// the record's span.
std::vector<Allocation> allocate_span_quantity(
    const RawRecord& record, std::span<const WindowOverlap> decomposition,
    std::size_t origin = 0);

/// Sum of allocations sharing one window, item, and vendor.
std::int64_t sum_short_records(std::span<const Allocation> allocations);

struct BiometricMean {
  int value = 0;
  int sample_count = 0;

  friend bool operator==(const BiometricMean&, const BiometricMean&) = default;
};

/// Mean of point samples rounded half away from zero; nullopt when empty.
std::optional<BiometricMean> average_biometric(std::span<const std::int64_t> samples);

/// Stage with the most seconds (ties: deep > rem > light > awake) and the
/// total seconds across all stages.
std::optional<std::pair<SleepStage, std::int64_t>> dominant_sleep_stage(
    const std::array<std::int64_t, 4>& stage_seconds);

struct Conflict {
  LocalTimestamp window_start;
  FrameItem item = FrameItem::steps;
  VendorKind kept = VendorKind::samsung;
  VendorKind dropped = VendorKind::samsung;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Per item, keeps the value of the highest-priority vendor that has it.
/// Values are never summed across vendors.
CanonicalFrame merge_sources(
    std::span<const std::pair<VendorKind, CanonicalFrame>> vendor_frames,
    const MergePolicy& policy, std::vector<Conflict>* conflicts = nullptr);

struct VendorTotals {
  std::int64_t raw_steps = 0;        // sum of record step values
  std::int64_t frame_steps = 0;      // sum over this vendor's frames, pre-merge
  std::array<std::int64_t, 3> record_minutes{};  // activity, exercise, sleep
  std::array<std::int64_t, 3> frame_minutes{};
  std::array<std::int64_t, 3> clamped_minutes{};  // cut at the interval cap
};

struct IntegrationTrace {
  std::array<VendorTotals, 4> vendors{};
  /// Minutes allocated per input record (0 for non-duration records).
  std::vector<std::int64_t> record_minutes;
  std::vector<Conflict> conflicts;  // ascending by window, then item
};

struct IntegrationResult {
  Dataset dataset;
  IntegrationTrace trace;
};

/// Builds the fixed-interval dataset. Pure in the record multiset. Throws
/// empty-dataset when no record lands on the grid.
IntegrationResult integrate_traced(std::span<const RawRecord> records,
                                   const WindowGrid& grid,
                                   const MergePolicy& policy = {});

Dataset integrate(std::span<const RawRecord> records, const WindowGrid& grid,
                  const MergePolicy& policy = {});

/// One summary per date of the collection span, empty dates zeroed.
std::vector<DailySummary> daily_rollup(const Dataset& dataset);

}  // namespace vital
