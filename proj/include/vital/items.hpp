#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace vital {

enum class ItemKind {
  steps,
  activity_duration,
  exercise_duration,
  heart_rate,
  oxygen_saturation,
  sleep_duration,
  sleep_stage,
};

inline constexpr std::array<ItemKind, 7> kAllItems = {
    ItemKind::steps,          ItemKind::activity_duration,
    ItemKind::exercise_duration, ItemKind::heart_rate,
    ItemKind::oxygen_saturation, ItemKind::sleep_duration,
    ItemKind::sleep_stage};

enum class SleepStage { deep, light, rem, awake };

inline constexpr std::array<SleepStage, 4> kAllStages = {
    SleepStage::deep, SleepStage::light, SleepStage::rem, SleepStage::awake};

enum class VendorKind { samsung, apple, fitbit, xiaomi };

inline constexpr std::array<VendorKind, 4> kAllVendors = {
    VendorKind::samsung, VendorKind::apple, VendorKind::fitbit,
    VendorKind::xiaomi};

std::string_view to_string(ItemKind item);
std::string_view to_string(SleepStage stage);
std::string_view to_string(VendorKind vendor);

std::optional<ItemKind> parse_item_kind(std::string_view text);
/// Exact canonical names only (`deep`, `light`, `rem`, `awake`).
std::optional<SleepStage> parse_sleep_stage(std::string_view text);
std::optional<VendorKind> parse_vendor(std::string_view text);

/// Span items carry a [start, end) interval; the rest are point samples.
constexpr bool is_span_item(ItemKind item) {
  return item != ItemKind::heart_rate && item != ItemKind::oxygen_saturation;
}

constexpr bool is_duration_item(ItemKind item) {
  return item == ItemKind::activity_duration ||
         item == ItemKind::exercise_duration ||
         item == ItemKind::sleep_duration || item == ItemKind::sleep_stage;
}

constexpr std::size_t index_of(ItemKind item) {
  return static_cast<std::size_t>(item);
}
constexpr std::size_t index_of(VendorKind vendor) {
  return static_cast<std::size_t>(vendor);
}
constexpr std::size_t index_of(SleepStage stage) {
  return static_cast<std::size_t>(stage);
}

}  // namespace vital
