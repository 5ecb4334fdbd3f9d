#include "vital/items.hpp"

namespace vital {

std::string_view to_string(ItemKind item) {
  switch (item) {
    case ItemKind::steps: return "steps";
    case ItemKind::activity_duration: return "activity_duration";
    case ItemKind::exercise_duration: return "exercise_duration";
    case ItemKind::heart_rate: return "heart_rate";
    case ItemKind::oxygen_saturation: return "oxygen_saturation";
    case ItemKind::sleep_duration: return "sleep_duration";
    case ItemKind::sleep_stage: return "sleep_stage";
  }
  return "?";
}

std::string_view to_string(SleepStage stage) {
  switch (stage) {
    case SleepStage::deep: return "deep";
    case SleepStage::light: return "light";
    case SleepStage::rem: return "rem";
    case SleepStage::awake: return "awake";
  }
  return "?";
}

std::string_view to_string(VendorKind vendor) {
  switch (vendor) {
    case VendorKind::samsung: return "samsung";
    case VendorKind::apple: return "apple";
    case VendorKind::fitbit: return "fitbit";
    case VendorKind::xiaomi: return "xiaomi";
  }
  return "?";
}

std::optional<ItemKind> parse_item_kind(std::string_view text) {
  for (ItemKind item : kAllItems) {
    if (to_string(item) == text) return item;
  }
  return std::nullopt;
}

std::optional<SleepStage> parse_sleep_stage(std::string_view text) {
  for (SleepStage stage : kAllStages) {
    if (to_string(stage) == text) return stage;
  }
  return std::nullopt;
}

std::optional<VendorKind> parse_vendor(std::string_view text) {
  for (VendorKind vendor : kAllVendors) {
    if (to_string(vendor) == text) return vendor;
  }
  return std::nullopt;
}

}  // namespace vital
