#include "oracles.hpp"

#include <cmath>
#include <limits>

namespace vital::testing {

namespace {

using i128 = __int128;

void search(std::int64_t quantity, std::span<const std::int64_t> weights, i128 total,
            std::size_t index, std::int64_t left, std::vector<std::int64_t>& current,
            i128 error, std::optional<i128>& best_error, std::vector<std::int64_t>& best) {
  if (index + 1 == weights.size()) {
    current[index] = left;
    const i128 d = i128{left} * total - i128{quantity} * weights[index];
    const i128 e = error + d * d;
    if (!best_error || e < *best_error) {
      best_error = e;
      best = current;
    }
    return;
  }
  for (std::int64_t a = left; a >= 0; --a) {
    current[index] = a;
    const i128 d = i128{a} * total - i128{quantity} * weights[index];
    search(quantity, weights, total, index + 1, left - a, current, error + d * d, best_error,
           best);
  }
}

}  // namespace

std::vector<std::int64_t> brute_force_apportion(std::int64_t quantity,
                                                std::span<const std::int64_t> weights) {
  i128 total = 0;
  for (auto w : weights) total += w;
  std::vector<std::int64_t> current(weights.size()), best;
  std::optional<i128> best_error;
  search(quantity, weights, total, 0, quantity, current, 0, best_error, best);
  return best;
}

std::optional<long double> textbook_pearson(std::span<const std::pair<double, double>> pairs) {
  const auto n = static_cast<long double>(pairs.size());
  if (pairs.size() < 2) return std::nullopt;
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& [x, y] : pairs) {
    const long double a = x, b = y;
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  const long double vx = n * sxx - sx * sx;
  const long double vy = n * syy - sy * sy;
  if (vx <= 0 || vy <= 0) return std::nullopt;
  return (n * sxy - sx * sy) / std::sqrt(vx * vy);
}

PlausibilityScan scan_plausibility(const Dataset& dataset, const FilterSpec& spec) {
  PlausibilityScan out;
  for (const CanonicalFrame& f : dataset.frames) {
    const bool asleep = f.sleep_minutes.has_value() &&
                        *f.sleep_minutes >= spec.sleep_window_min_minutes &&
                        f.sleep_stage != SleepStage::awake;
    if (asleep && f.steps.has_value() && *f.steps > spec.steps_during_sleep_step_threshold) {
      out.steps_during_sleep.push_back(f.window_start);
    }
    if (f.heart_rate_bpm.has_value() &&
        (*f.heart_rate_bpm < spec.hr_low || *f.heart_rate_bpm > spec.hr_high)) {
      out.hr_outliers.push_back(f.window_start);
    }
    if (f.steps.has_value() && f.heart_rate_bpm.has_value()) {
      out.step_hr_pairs.emplace_back(static_cast<double>(*f.steps), *f.heart_rate_bpm);
    }
  }
  return out;
}

}  // namespace vital::testing
