#include "vital/serialize.hpp"

#include "vital/error.hpp"

namespace vital {

namespace {

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

Date date_from(const Json& j) {
  const auto text = j.get<std::string>();
  auto d = Date::parse(text);
  if (!d) throw Error(ErrorCode::parse_error, "malformed date '" + text + "'");
  return *d;
}

LocalTimestamp timestamp_from(const Json& j) {
  const auto text = j.get<std::string>();
  auto t = LocalTimestamp::parse(text);
  if (!t) throw Error(ErrorCode::parse_error, "malformed timestamp '" + text + "'");
  return *t;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed document: ") + e.what());
  }
}

}  // namespace

Json to_json(const CanonicalFrame& f) {
  Json j;
  j["window_start"] = f.window_start.to_string();
  put_optional(j, "steps", f.steps);
  put_optional(j, "activity_min", f.activity_minutes);
  put_optional(j, "exercise_min", f.exercise_minutes);
  put_optional(j, "heart_rate_bpm", f.heart_rate_bpm);
  put_optional(j, "spo2_pct", f.spo2_percent);
  put_optional(j, "sleep_min", f.sleep_minutes);
  j["sleep_stage"] = f.sleep_stage ? Json(to_string(*f.sleep_stage)) : Json(nullptr);
  Json sources = Json::object();
  for (FrameItem item : kAllFrameItems) {
    if (auto v = f.source(item)) sources[std::string(column_name(item))] = to_string(*v);
  }
  j["sources"] = std::move(sources);
  j["heart_rate_samples"] = f.heart_rate_samples;
  j["spo2_samples"] = f.spo2_samples;
  return j;
}

CanonicalFrame frame_from_json(const Json& j) {
  return guarded([&] {
    CanonicalFrame f;
    f.window_start = timestamp_from(j.at("window_start"));
    f.steps = get_optional<std::int64_t>(j, "steps");
    f.activity_minutes = get_optional<int>(j, "activity_min");
    f.exercise_minutes = get_optional<int>(j, "exercise_min");
    f.heart_rate_bpm = get_optional<int>(j, "heart_rate_bpm");
    f.spo2_percent = get_optional<int>(j, "spo2_pct");
    f.sleep_minutes = get_optional<int>(j, "sleep_min");
    if (auto stage = get_optional<std::string>(j, "sleep_stage")) {
      f.sleep_stage = parse_sleep_stage(*stage);
      if (!f.sleep_stage) throw Error(ErrorCode::parse_error, "unknown sleep stage " + *stage);
    }
    for (const auto& [key, value] : j.at("sources").items()) {
      auto item = parse_frame_item(key);
      auto vendor = parse_vendor(value.get<std::string>());
      if (!item || !vendor) throw Error(ErrorCode::parse_error, "bad source entry " + key);
      f.sources[index_of(*item)] = *vendor;
    }
    f.heart_rate_samples = j.value("heart_rate_samples", 0);
    f.spo2_samples = j.value("spo2_samples", 0);
    return f;
  });
}

Json to_json(const Dataset& d) {
  Json j;
  j["dataset_id"] = d.dataset_id;
  j["timezone"] = d.timezone;
  j["interval_minutes"] = d.grid.interval_minutes();
  Json frames = Json::array();
  for (const auto& f : d.frames) frames.push_back(to_json(f));
  j["frames"] = std::move(frames);
  Json stages = Json::array();
  for (const auto& t : d.day_stage_totals) {
    stages.push_back({{"date", t.date.to_string()},
                      {"vendor", to_string(t.vendor)},
                      {"stage", to_string(t.stage)},
                      {"minutes", t.minutes}});
  }
  j["day_stage_totals"] = std::move(stages);
  return j;
}

Dataset dataset_from_json(const Json& j) {
  Dataset d = guarded([&] {
    Dataset d;
    d.dataset_id = j.at("dataset_id").get<std::string>();
    d.timezone = j.at("timezone").get<std::string>();
    d.grid = WindowGrid(j.at("interval_minutes").get<int>());
    for (const auto& f : j.at("frames")) d.frames.push_back(frame_from_json(f));
    for (const auto& t : j.at("day_stage_totals")) {
      auto vendor = parse_vendor(t.at("vendor").get<std::string>());
      auto stage = parse_sleep_stage(t.at("stage").get<std::string>());
      if (!vendor || !stage) throw Error(ErrorCode::parse_error, "bad day stage entry");
      d.day_stage_totals.push_back(
          {date_from(t.at("date")), *vendor, *stage, t.at("minutes").get<int>()});
    }
    return d;
  });
  validate_dataset(d);
  return d;
}

Json to_json(const DailySummary& s) {
  Json j;
  j["date"] = s.date.to_string();
  j["total_steps"] = s.total_steps;
  j["total_sleep_minutes"] = s.total_sleep_minutes;
  j["total_activity_minutes"] = s.total_activity_minutes;
  j["total_exercise_minutes"] = s.total_exercise_minutes;
  put_optional(j, "mean_heart_rate_bpm", s.mean_heart_rate_bpm);
  put_optional(j, "mean_spo2_percent", s.mean_spo2_percent);
  j["wear_minutes"] = s.wear_minutes;
  j["nonempty_windows"] = s.nonempty_windows;
  Json stages = Json::object();
  for (SleepStage stage : kAllStages) {
    if (auto m = s.day_level_stage_minutes[index_of(stage)]) {
      stages[std::string(to_string(stage))] = *m;
    }
  }
  j["day_level_stage_minutes"] = std::move(stages);
  return j;
}

Json to_json(const FilterSpec& s) {
  Json j;
  put_optional(j, "min_wear_minutes_per_day", s.min_wear_minutes_per_day);
  put_optional(j, "min_steps_per_day", s.min_steps_per_day);
  if (s.date_range) {
    j["date_range"] = {{"first", s.date_range->first.to_string()},
                       {"last", s.date_range->last.to_string()}};
  } else {
    j["date_range"] = nullptr;
  }
  j["hr_bounds"] = {{"low", s.hr_low}, {"high", s.hr_high}};
  j["steps_during_sleep_step_threshold"] = s.steps_during_sleep_step_threshold;
  j["sleep_window_min_minutes"] = s.sleep_window_min_minutes;
  j["recency_lookback_days"] = s.recency_lookback_days;
  j["min_correlation_pairs"] = s.min_correlation_pairs;
  return j;
}

FilterSpec filter_spec_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::bad_request, "filter spec must be an object");
  try {
    FilterSpec s;
    s.min_wear_minutes_per_day = get_optional<int>(j, "min_wear_minutes_per_day");
    s.min_steps_per_day = get_optional<std::int64_t>(j, "min_steps_per_day");
    if (auto it = j.find("date_range"); it != j.end() && !it->is_null()) {
      auto first = Date::parse(it->at("first").get<std::string>());
      auto last = Date::parse(it->at("last").get<std::string>());
      if (!first || !last) throw Error(ErrorCode::bad_request, "malformed date_range");
      s.date_range = DateRange{*first, *last};
    }
    if (auto it = j.find("hr_bounds"); it != j.end() && !it->is_null()) {
      s.hr_low = it->value("low", s.hr_low);
      s.hr_high = it->value("high", s.hr_high);
    }
    s.steps_during_sleep_step_threshold =
        j.value("steps_during_sleep_step_threshold", s.steps_during_sleep_step_threshold);
    s.sleep_window_min_minutes = j.value("sleep_window_min_minutes", s.sleep_window_min_minutes);
    s.recency_lookback_days = j.value("recency_lookback_days", s.recency_lookback_days);
    s.min_correlation_pairs = j.value("min_correlation_pairs", s.min_correlation_pairs);
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::bad_request, std::string("malformed filter spec: ") + e.what());
  }
}

Json to_json(const QualityReport& r) {
  Json j;
  Json per_day = Json::object();
  for (const auto& [d, v] : r.per_day_completeness) per_day[d.to_string()] = v;
  j["per_day_completeness"] = std::move(per_day);
  j["overall_completeness"] = r.overall_completeness;
  j["recency"] = {{"proportion", r.recency.proportion},
                  {"average_age_days", r.recency.average_age_days},
                  {"reference", r.recency.reference.to_string()},
                  {"lookback_days", r.recency.lookback_days}};
  const auto& p = r.plausibility;
  Json sleep = Json::array();
  for (const auto& f : p.steps_during_sleep) {
    sleep.push_back({{"window_start", f.window_start.to_string()},
                     {"steps", f.steps},
                     {"sleep_minutes", f.sleep_minutes}});
  }
  Json outliers = Json::array();
  for (const auto& o : p.hr_outliers) {
    outliers.push_back({{"window_start", o.window_start.to_string()}, {"bpm", o.bpm}});
  }
  Json plaus;
  plaus["steps_during_sleep"] = std::move(sleep);
  put_optional(plaus, "step_hr_correlation", p.step_hr_correlation);
  plaus["correlation_pairs"] = p.correlation_pairs;
  plaus["hr_outliers"] = std::move(outliers);
  plaus["thresholds"] = to_json(p.thresholds);
  j["plausibility"] = std::move(plaus);
  Json wear = Json::object();
  for (const auto& [d, m] : r.per_day_wear_minutes) wear[d.to_string()] = m;
  j["per_day_wear_minutes"] = std::move(wear);
  return j;
}

QualityReport quality_report_from_json(const Json& j) {
  return guarded([&] {
    QualityReport r;
    for (const auto& [k, v] : j.at("per_day_completeness").items()) {
      r.per_day_completeness[date_from(Json(k))] = v.get<double>();
    }
    r.overall_completeness = j.at("overall_completeness").get<double>();
    const auto& rec = j.at("recency");
    r.recency.proportion = rec.at("proportion").get<double>();
    r.recency.average_age_days = rec.at("average_age_days").get<double>();
    r.recency.reference = timestamp_from(rec.at("reference"));
    r.recency.lookback_days = rec.at("lookback_days").get<int>();
    const auto& p = j.at("plausibility");
    for (const auto& f : p.at("steps_during_sleep")) {
      r.plausibility.steps_during_sleep.push_back(
          {timestamp_from(f.at("window_start")), f.at("steps").get<std::int64_t>(),
           f.at("sleep_minutes").get<int>()});
    }
    r.plausibility.step_hr_correlation = get_optional<double>(p, "step_hr_correlation");
    r.plausibility.correlation_pairs = p.at("correlation_pairs").get<int>();
    for (const auto& o : p.at("hr_outliers")) {
      r.plausibility.hr_outliers.push_back(
          {timestamp_from(o.at("window_start")), o.at("bpm").get<int>()});
    }
    r.plausibility.thresholds = filter_spec_from_json(p.at("thresholds"));
    for (const auto& [k, v] : j.at("per_day_wear_minutes").items()) {
      r.per_day_wear_minutes[date_from(Json(k))] = v.get<int>();
    }
    return r;
  });
}

Json retention_summary(const FilterResult& result) {
  Json kept = Json::array();
  for (const auto& d : result.kept_dates) kept.push_back(d.to_string());
  Json dropped = Json::array();
  for (const auto& d : result.dropped_dates) {
    dropped.push_back({{"date", d.date.to_string()}, {"reason", to_string(d.reason)}});
  }
  return {{"kept_dates", std::move(kept)},
          {"dropped_dates", std::move(dropped)},
          {"kept_frame_count", result.dataset.frames.size()}};
}

Json to_json(const Diagnostic& d) {
  return {{"file", d.file}, {"line", d.line}, {"code", d.code}, {"message", d.message}};
}

}  // namespace vital
