#include <algorithm>

#include "vital/adapters.hpp"
#include "vital/error.hpp"

namespace vital {

namespace {

using R = ColumnRole;

FileSchema make(std::string id, VendorKind vendor, ItemKind item,
                TimestampFormat format, std::vector<ColumnSpec> columns) {
  FileSchema s;
  s.id = std::move(id);
  s.vendor = vendor;
  s.item = item;
  s.timestamp_format = format;
  s.columns = std::move(columns);
  return s;
}

std::vector<FileSchema> samsung_schemas() {
  constexpr auto v = VendorKind::samsung;
  constexpr auto f = TimestampFormat::samsung;
  std::vector<FileSchema> out;
  out.push_back(make("samsung.steps", v, ItemKind::steps, f,
                     {{"step_count.start_time", R::start},
                      {"step_count.end_time", R::end},
                      {"step_count.count", R::value}}));
  out.push_back(make("samsung.activity", v, ItemKind::activity_duration, f,
                     {{"activity.start_time", R::start},
                      {"activity.end_time", R::end},
                      {"activity.active_time", R::duration}}));
  out.push_back(make("samsung.exercise", v, ItemKind::exercise_duration, f,
                     {{"exercise.start_time", R::start},
                      {"exercise.end_time", R::end},
                      {"exercise.count", R::steps},
                      {"exercise.duration", R::duration}}));
  out.push_back(make("samsung.heart_rate", v, ItemKind::heart_rate, f,
                     {{"heart_rate.start_time", R::start},
                      {"heart_rate.end_time", R::end},
                      {"heart_rate.heart_rate", R::value}}));
  out.push_back(make("samsung.oxygen_saturation", v,
                     ItemKind::oxygen_saturation, f,
                     {{"oxygen_saturation.start_time", R::start},
                      {"oxygen_saturation.end_time", R::end},
                      {"oxygen_saturation.spo2", R::value}}));
  out.push_back(make("samsung.sleep", v, ItemKind::sleep_duration, f,
                     {{"sleep.start_time", R::start},
                      {"sleep.end_time", R::end},
                      {"sleep.sleep_duration", R::duration}}));
  out.push_back(make("samsung.sleep_stage", v, ItemKind::sleep_stage, f,
                     {{"sleep_stage.start_time", R::start},
                      {"sleep_stage.end_time", R::end},
                      {"sleep_stage.stage", R::stage}}));
  for (auto& s : out) s.duration_unit = DurationUnit::milliseconds;
  return out;
}

std::vector<FileSchema> apple_schemas() {
  constexpr auto v = VendorKind::apple;
  constexpr auto f = TimestampFormat::apple;
  std::vector<FileSchema> out;
  out.push_back(make("apple.steps", v, ItemKind::steps, f,
                     {{"stepCount.startDate", R::start},
                      {"stepCount.endDate", R::end},
                      {"stepCount.value", R::value}}));
  out.push_back(make("apple.activity", v, ItemKind::activity_duration, f,
                     {{"activity.startDate", R::start},
                      {"activity.endDate", R::end}}));
  out.push_back(make("apple.exercise", v, ItemKind::exercise_duration, f,
                     {{"workout.startDate", R::start},
                      {"workout.endDate", R::end}}));
  out.push_back(make("apple.heart_rate", v, ItemKind::heart_rate, f,
                     {{"heartRate.startDate", R::start},
                      {"heartRate.endDate", R::end},
                      {"heartRate.value", R::value}}));
  FileSchema spo2 = make("apple.oxygen_saturation", v,
                         ItemKind::oxygen_saturation, f,
                         {{"oxygenSaturation.startDate", R::start},
                          {"oxygenSaturation.endDate", R::end},
                          {"oxygenSaturation.value", R::value}});
  spo2.fractional_value = true;
  spo2.value_scale = 100.0;
  out.push_back(std::move(spo2));
  out.push_back(make("apple.sleep", v, ItemKind::sleep_duration, f,
                     {{"sleepAnalysis.startDate", R::start},
                      {"sleepAnalysis.endDate", R::end}}));
  out.push_back(make("apple.sleep_stage", v, ItemKind::sleep_stage, f,
                     {{"sleepStage.startDate", R::start},
                      {"sleepStage.endDate", R::end},
                      {"sleepStage.value", R::stage}}));
  return out;
}

std::vector<FileSchema> fitbit_schemas() {
  constexpr auto v = VendorKind::fitbit;
  std::vector<FileSchema> out;
  FileSchema steps = make("fitbit.steps", v, ItemKind::steps,
                          TimestampFormat::fitbit_us,
                          {{"Time", R::start}, {"Steps", R::value}});
  steps.implied_span_seconds = 60;
  out.push_back(std::move(steps));
  FileSchema exercise = make("fitbit.exercise", v, ItemKind::exercise_duration,
                             TimestampFormat::fitbit_us,
                             {{"Activity Name", R::label},
                              {"Start Time", R::start},
                              {"Duration", R::duration},
                              {"Steps", R::steps}});
  exercise.duration_unit = DurationUnit::milliseconds;
  out.push_back(std::move(exercise));
  out.push_back(make("fitbit.heart_rate", v, ItemKind::heart_rate,
                     TimestampFormat::fitbit_us,
                     {{"Time", R::start}, {"Heart Rate", R::value}}));
  FileSchema fitbit_spo2 = make("fitbit.oxygen_saturation", v,
                                ItemKind::oxygen_saturation, TimestampFormat::fitbit_iso,
                                {{"timestamp", R::start}, {"SpO2", R::value}});
  fitbit_spo2.fractional_value = true;
  out.push_back(std::move(fitbit_spo2));
  FileSchema sleep = make("fitbit.sleep", v, ItemKind::sleep_duration,
                          TimestampFormat::fitbit_iso,
                          {{"logId", R::label},
                           {"startTime", R::start},
                           {"duration", R::duration}});
  sleep.duration_unit = DurationUnit::milliseconds;
  out.push_back(std::move(sleep));
  FileSchema stage = make("fitbit.sleep_stage", v, ItemKind::sleep_stage,
                          TimestampFormat::fitbit_iso,
                          {{"dateTime", R::start},
                           {"level", R::stage},
                           {"seconds", R::duration}});
  stage.duration_unit = DurationUnit::seconds;
  out.push_back(std::move(stage));
  return out;
}

std::vector<FileSchema> xiaomi_schemas() {
  constexpr auto v = VendorKind::xiaomi;
  constexpr auto f = TimestampFormat::xiaomi;
  std::vector<FileSchema> out;
  FileSchema steps = make("xiaomi.steps", v, ItemKind::steps, f,
                          {{"date", R::date},
                           {"time", R::time},
                           {"steps", R::value}});
  steps.implied_span_seconds = 60;
  out.push_back(std::move(steps));
  // Zepp Life lists these under "consistent activity"; read as exercise spans.
  out.push_back(make("xiaomi.exercise", v, ItemKind::exercise_duration, f,
                     {{"date", R::date},
                      {"startTime", R::time},
                      {"endTime", R::end_time},
                      {"steps", R::steps}}));
  out.push_back(make("xiaomi.heart_rate", v, ItemKind::heart_rate, f,
                     {{"date", R::date},
                      {"time", R::time},
                      {"heartRate", R::value}}));
  out.push_back(make("xiaomi.sleep", v, ItemKind::sleep_duration, f,
                     {{"date", R::date},
                      {"startTime", R::time},
                      {"sleepMinutes", R::duration}}));
  FileSchema stage = make("xiaomi.sleep_stage", v, ItemKind::sleep_stage, f,
                          {{"date", R::date},
                           {"stage", R::stage},
                           {"minutes", R::duration}});
  stage.day_level = true;
  out.push_back(std::move(stage));
  return out;
}

}  // namespace

const ColumnSpec* FileSchema::column(ColumnRole role) const {
  for (const auto& c : columns) {
    if (c.role == role) return &c;
  }
  return nullptr;
}

bool vendor_exports(VendorKind vendor, ItemKind item) {
  switch (vendor) {
    case VendorKind::samsung:
    case VendorKind::apple:
      return true;
    case VendorKind::fitbit:
      return item != ItemKind::activity_duration;
    case VendorKind::xiaomi:
      return item != ItemKind::activity_duration &&
             item != ItemKind::oxygen_saturation;
  }
  return false;
}

AdapterConfig AdapterConfig::defaults() {
  AdapterConfig config;
  for (auto* group : {&samsung_schemas, &apple_schemas, &fitbit_schemas,
                      &xiaomi_schemas}) {
    for (auto& s : (*group)()) config.schemas.push_back(std::move(s));
  }
  // Placeholder codes, not a published vendor mapping.
  config.samsung_sleep_stage_codes = {{40001, SleepStage::awake},
                                      {40002, SleepStage::light},
                                      {40003, SleepStage::deep},
                                      {40004, SleepStage::rem}};
  config.stage_synonyms = {{"core", SleepStage::light},
                           {"asleepcore", SleepStage::light},
                           {"asleepdeep", SleepStage::deep},
                           {"asleeprem", SleepStage::rem},
                           {"shallow", SleepStage::light},
                           {"wake", SleepStage::awake}};
  return config;
}

void AdapterConfig::validate() const {
  for (const auto& s : schemas) {
    if (!vendor_exports(s.vendor, s.item)) {
      throw Error(ErrorCode::invalid_config,
                  "schema " + s.id + " emits " + std::string(to_string(s.item)) +
                      ", which " + std::string(to_string(s.vendor)) +
                      " does not export");
    }
    if (!s.column(ColumnRole::start) && !s.column(ColumnRole::date)) {
      throw Error(ErrorCode::invalid_config, "schema " + s.id + " has no start column");
    }
    if (s.vendor == VendorKind::samsung && s.item == ItemKind::sleep_stage &&
        samsung_sleep_stage_codes.empty()) {
      throw Error(ErrorCode::invalid_config,
                  "samsung sleep stages need samsung_sleep_stage_codes");
    }
  }
  for (VendorKind vendor : kAllVendors) {
    for (ItemKind item : kAllItems) {
      if (!vendor_exports(vendor, item)) continue;
      const bool covered =
          std::any_of(schemas.begin(), schemas.end(), [&](const FileSchema& s) {
            return s.vendor == vendor && s.item == item;
          });
      if (!covered) {
        throw Error(ErrorCode::invalid_config,
                    "no schema for " + std::string(to_string(vendor)) + " " +
                        std::string(to_string(item)));
      }
    }
  }
}

const FileSchema& find_schema(const AdapterConfig& config, std::string_view id) {
  for (const auto& s : config.schemas) {
    if (s.id == id) return s;
  }
  throw Error(ErrorCode::not_found, "no schema named " + std::string(id));
}

}  // namespace vital
