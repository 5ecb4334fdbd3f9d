#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vital/frame.hpp"

namespace vital {

struct DateRange {
  Date first;
  Date last;

  friend bool operator==(const DateRange&, const DateRange&) = default;
};

/// Day-retention criteria plus plausibility thresholds. The threshold
/// defaults are this project's choices.
struct FilterSpec {
  std::optional<int> min_wear_minutes_per_day;
  std::optional<std::int64_t> min_steps_per_day;
  std::optional<DateRange> date_range;
  int hr_low = 25;
  int hr_high = 220;
  int steps_during_sleep_step_threshold = 20;
  int sleep_window_min_minutes = 8;
  int recency_lookback_days = 30;
  int min_correlation_pairs = 30;

  /// Throws invalid-config.
  void validate() const;
  bool has_retention_criteria() const {
    return min_wear_minutes_per_day || min_steps_per_day || date_range;
  }

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

struct SleepStepFinding {
  LocalTimestamp window_start;
  std::int64_t steps = 0;
  int sleep_minutes = 0;

  friend bool operator==(const SleepStepFinding&, const SleepStepFinding&) = default;
};

struct HeartRateOutlier {
  LocalTimestamp window_start;
  int bpm = 0;

  friend bool operator==(const HeartRateOutlier&, const HeartRateOutlier&) = default;
};

struct PlausibilityFindings {
  std::vector<SleepStepFinding> steps_during_sleep;
  std::optional<double> step_hr_correlation;
  int correlation_pairs = 0;
  std::vector<HeartRateOutlier> hr_outliers;
  FilterSpec thresholds;  // echo of the config used
};

struct RecencyResult {
  double proportion = 0.0;
  double average_age_days = 0.0;
  LocalTimestamp reference;
  int lookback_days = 0;
};

struct CompletenessResult {
  std::map<Date, double> per_day;
  double overall = 0.0;
};

struct QualityReport {
  std::map<Date, double> per_day_completeness;
  double overall_completeness = 0.0;
  RecencyResult recency;
  PlausibilityFindings plausibility;
  std::map<Date, int> per_day_wear_minutes;
};

/// Non-empty windows on `date` times the interval; 0 outside the span.
int wear_minutes(const Dataset& dataset, Date date);

CompletenessResult completeness(const Dataset& dataset);

/// Reference defaults to the last frame's window start. Throws
/// invalid-config when lookback_days <= 0.
RecencyResult recency(const Dataset& dataset, int lookback_days,
                      std::optional<LocalTimestamp> reference = std::nullopt);

/// Pearson product-moment correlation; nullopt for n < 2 or zero variance.
std::optional<double> pearson_r(std::span<const std::pair<double, double>> pairs);

PlausibilityFindings plausibility(const Dataset& dataset, const FilterSpec& spec);

QualityReport quality_report(const Dataset& dataset, const FilterSpec& spec,
                             std::optional<LocalTimestamp> reference = std::nullopt);

enum class DropReason { wear_time, step_count, date_range };
std::string_view to_string(DropReason reason);

struct DroppedDate {
  Date date;
  DropReason reason;

  friend bool operator==(const DroppedDate&, const DroppedDate&) = default;
};

struct FilterResult {
  Dataset dataset;
  std::vector<Date> kept_dates;
  std::vector<DroppedDate> dropped_dates;
};

/// Keeps a date iff it meets every present criterion (inclusive). Dates are
/// all calendar days of the collection span; the input is not modified.
FilterResult apply_filter(const Dataset& dataset, const FilterSpec& spec);

}  // namespace vital
