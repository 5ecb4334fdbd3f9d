#include "vital/quality.hpp"

#include <algorithm>
#include <cmath>

#include "vital/error.hpp"

namespace vital {

void FilterSpec::validate() const {
  auto bad = [](const std::string& what) {
    return Error(ErrorCode::invalid_config, what);
  };
  if (hr_low >= hr_high) throw bad("hr_bounds low must be below high");
  if (hr_low < 0) throw bad("hr_bounds must be non-negative");
  if (min_wear_minutes_per_day && *min_wear_minutes_per_day < 0) {
    throw bad("min_wear_minutes_per_day must be non-negative");
  }
  if (min_steps_per_day && *min_steps_per_day < 0) {
    throw bad("min_steps_per_day must be non-negative");
  }
  if (date_range && date_range->last < date_range->first) {
    throw bad("date_range first must not be after last");
  }
  if (steps_during_sleep_step_threshold < 0) {
    throw bad("steps_during_sleep_step_threshold must be non-negative");
  }
  if (sleep_window_min_minutes < 0) throw bad("sleep_window_min_minutes must be non-negative");
  if (recency_lookback_days <= 0) throw bad("recency_lookback_days must be positive");
  if (min_correlation_pairs < 2) throw bad("min_correlation_pairs must be at least 2");
}

int wear_minutes(const Dataset& dataset, Date date) {
  return static_cast<int>(dataset.frames_on(date).size()) *
         dataset.grid.interval_minutes();
}

CompletenessResult completeness(const Dataset& dataset) {
  CompletenessResult out;
  const auto span = dataset.collection_span();
  if (!span) return out;
  const double per_day_windows = dataset.grid.windows_per_day();
  double sum = 0.0;
  for (Date d = span->first; d <= span->last; d = d.next()) {
    const double v = static_cast<double>(dataset.frames_on(d).size()) / per_day_windows;
    out.per_day[d] = v;
    sum += v;
  }
  out.overall = sum / static_cast<double>(out.per_day.size());
  return out;
}

RecencyResult recency(const Dataset& dataset, int lookback_days,
                      std::optional<LocalTimestamp> reference) {
  if (lookback_days <= 0) {
    throw Error(ErrorCode::invalid_config, "recency lookback must be positive");
  }
  RecencyResult out;
  out.lookback_days = lookback_days;
  if (dataset.frames.empty()) return out;
  out.reference = reference.value_or(dataset.frames.back().window_start);
  const std::int64_t lower =
      out.reference.seconds() - std::int64_t{lookback_days} * kSecondsPerDay;
  std::int64_t inside = 0;
  double age_sum = 0.0;
  for (const CanonicalFrame& f : dataset.frames) {
    const std::int64_t t = f.window_start.seconds();
    if (t >= lower && t <= out.reference.seconds()) ++inside;
    age_sum += static_cast<double>(out.reference.seconds() - t) / kSecondsPerDay;
  }
  const auto n = static_cast<double>(dataset.frames.size());
  out.proportion = static_cast<double>(inside) / n;
  out.average_age_days = age_sum / n;
  return out;
}

std::optional<double> pearson_r(std::span<const std::pair<double, double>> pairs) {
  const std::size_t n = pairs.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : pairs) {
    const double dx = x - mx, dy = y - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

PlausibilityFindings plausibility(const Dataset& dataset, const FilterSpec& spec) {
  PlausibilityFindings out;
  out.thresholds = spec;
  std::vector<std::pair<double, double>> pairs;
  for (const CanonicalFrame& f : dataset.frames) {
    if (f.sleep_minutes && *f.sleep_minutes >= spec.sleep_window_min_minutes &&
        f.sleep_stage != SleepStage::awake && f.steps &&
        *f.steps > spec.steps_during_sleep_step_threshold) {
      out.steps_during_sleep.push_back({f.window_start, *f.steps, *f.sleep_minutes});
    }
    if (f.heart_rate_bpm &&
        (*f.heart_rate_bpm < spec.hr_low || *f.heart_rate_bpm > spec.hr_high)) {
      out.hr_outliers.push_back({f.window_start, *f.heart_rate_bpm});
    }
    if (f.steps && f.heart_rate_bpm) {
      pairs.emplace_back(static_cast<double>(*f.steps),
                         static_cast<double>(*f.heart_rate_bpm));
    }
  }
  out.correlation_pairs = static_cast<int>(pairs.size());
  if (out.correlation_pairs >= spec.min_correlation_pairs) {
    out.step_hr_correlation = pearson_r(pairs);
  }
  return out;
}

QualityReport quality_report(const Dataset& dataset, const FilterSpec& spec,
                             std::optional<LocalTimestamp> reference) {
  spec.validate();
  QualityReport report;
  auto comp = completeness(dataset);
  report.per_day_completeness = std::move(comp.per_day);
  report.overall_completeness = comp.overall;
  report.recency = recency(dataset, spec.recency_lookback_days, reference);
  report.plausibility = plausibility(dataset, spec);
  for (const auto& [date, fraction] : report.per_day_completeness) {
    report.per_day_wear_minutes[date] = wear_minutes(dataset, date);
  }
  return report;
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::wear_time: return "wear_time";
    case DropReason::step_count: return "step_count";
    case DropReason::date_range: return "date_range";
  }
  return "?";
}

FilterResult apply_filter(const Dataset& dataset, const FilterSpec& spec) {
  spec.validate();
  FilterResult out;
  out.dataset = dataset;
  out.dataset.frames.clear();
  const auto span = dataset.collection_span();
  if (!span) return out;
  for (Date d = span->first; d <= span->last; d = d.next()) {
    const auto frames = dataset.frames_on(d);
    std::optional<DropReason> reason;
    if (spec.min_wear_minutes_per_day &&
        wear_minutes(dataset, d) < *spec.min_wear_minutes_per_day) {
      reason = DropReason::wear_time;
    } else if (spec.min_steps_per_day) {
      std::int64_t steps = 0;
      for (const auto& f : frames) steps += f.steps.value_or(0);
      if (steps < *spec.min_steps_per_day) reason = DropReason::step_count;
    }
    if (!reason && spec.date_range &&
        (d < spec.date_range->first || spec.date_range->last < d)) {
      reason = DropReason::date_range;
    }
    if (reason) {
      out.dropped_dates.push_back({d, *reason});
    } else {
      out.kept_dates.push_back(d);
      out.dataset.frames.insert(out.dataset.frames.end(), frames.begin(), frames.end());
    }
  }
  std::erase_if(out.dataset.day_stage_totals, [&](const DayStageTotal& t) {
    return !std::binary_search(out.kept_dates.begin(), out.kept_dates.end(), t.date);
  });
  return out;
}

}  // namespace vital
