#include "vital/integration.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "vital/error.hpp"
#include "vital/rounding.hpp"

namespace vital {

namespace {

[[noreturn]] void inconsistent(const std::string& what) {
  throw Error(ErrorCode::internal_consistency, what);
}

// Index into the three duration columns; -1 for non-duration items.
int duration_slot(ItemKind item) {
  switch (item) {
    case ItemKind::activity_duration: return 0;
    case ItemKind::exercise_duration: return 1;
    case ItemKind::sleep_duration: return 2;
    default: return -1;
  }
}

struct WindowAcc {
  std::int64_t steps = 0;
  bool has_steps = false;
  std::array<std::int64_t, 3> minutes{};
  std::array<bool, 3> has_minutes{};
  std::vector<std::int64_t> heart_rates;
  std::vector<std::int64_t> spo2;
  std::array<std::int64_t, 4> stage_seconds{};
  std::int64_t stage_minutes = 0;
  bool has_stage = false;
};

using VendorWindows = std::unordered_map<std::int64_t, WindowAcc>;

}  // namespace

const std::vector<VendorKind>& MergePolicy::priority_for(FrameItem item) const {
  auto it = overrides.find(item);
  return it == overrides.end() ? vendor_priority : it->second;
}

void MergePolicy::validate() const {
  auto check = [](const std::vector<VendorKind>& order) {
    std::vector<VendorKind> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<VendorKind>(kAllVendors.begin(), kAllVendors.end())) {
      throw Error(ErrorCode::invalid_config,
                  "vendor priority must list every vendor exactly once");
    }
  };
  check(vendor_priority);
  for (const auto& [item, order] : overrides) check(order);
}

std::vector<std::int64_t> largest_remainder(std::int64_t quantity,
                                            std::span<const std::int64_t> weights) {
  if (quantity < 0) inconsistent("cannot apportion a negative quantity");
  std::vector<std::int64_t> out(weights.size(), 0);
  __int128 total = 0;
  for (std::int64_t w : weights) {
    if (w < 0) inconsistent("negative apportionment weight");
    total += w;
  }
  if (total == 0) {
    if (quantity != 0) inconsistent("cannot apportion over zero total weight");
    return out;
  }
  std::vector<std::int64_t> remainder(weights.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const __int128 scaled = static_cast<__int128>(quantity) * weights[i];
    out[i] = static_cast<std::int64_t>(scaled / total);
    remainder[i] = static_cast<std::int64_t>(scaled % total);
    assigned += out[i];
  }
  std::int64_t leftover = quantity - assigned;  // < weights.size()
  if (leftover == 0) return out;
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; leftover > 0; ++k, --leftover) ++out[order[k]];
  return out;
}

std::vector<Allocation> allocate_span_quantity(
    const RawRecord& record, std::span<const WindowOverlap> decomposition,
    std::size_t origin) {
  if (!is_span_item(record.item) || !record.end) {
    inconsistent("record " + std::string(to_string(record.item)) +
                 " has no span to allocate");
  }
  if (decomposition.empty()) inconsistent("empty decomposition");
  std::int64_t covered = 0;
  std::vector<std::int64_t> weights;
  weights.reserve(decomposition.size());
  for (std::size_t i = 0; i < decomposition.size(); ++i) {
    const auto& w = decomposition[i];
    if (w.overlap_seconds <= 0) inconsistent("non-positive window overlap");
    if (i > 0 && !(decomposition[i - 1].window_start < w.window_start)) {
      inconsistent("decomposition windows not ascending");
    }
    covered += w.overlap_seconds;
    weights.push_back(w.overlap_seconds);
  }
  if (covered != record.span_seconds()) {
    inconsistent("decomposition covers " + std::to_string(covered) +
                 " s of a " + std::to_string(record.span_seconds()) + " s span");
  }

  std::vector<Allocation> out;
  auto apportion_steps = [&](std::int64_t quantity) {
    const auto shares = largest_remainder(quantity, weights);
    for (std::size_t i = 0; i < shares.size(); ++i) {
      out.push_back({decomposition[i].window_start, ItemKind::steps, shares[i],
                     record.vendor, origin});
    }
  };

  if (record.item == ItemKind::steps) {
    apportion_steps(record.value.value_or(0));
    return out;
  }
  for (const auto& w : decomposition) {
    out.push_back({w.window_start, record.item, w.overlap_seconds, record.vendor,
                   origin});
  }
  if (record.item == ItemKind::exercise_duration && record.exercise_steps) {
    apportion_steps(*record.exercise_steps);
  }
  return out;
}

std::int64_t sum_short_records(std::span<const Allocation> allocations) {
  std::int64_t total = 0;
  for (const auto& a : allocations) {
    const auto& first = allocations.front();
    if (a.window_start != first.window_start || a.item != first.item ||
        a.vendor != first.vendor) {
      inconsistent("sum_short_records needs one window, item and vendor");
    }
    total += a.amount;
  }
  return total;
}

std::optional<BiometricMean> average_biometric(std::span<const std::int64_t> samples) {
  if (samples.empty()) return std::nullopt;
  const std::int64_t sum = std::accumulate(samples.begin(), samples.end(), std::int64_t{0});
  const auto n = static_cast<std::int64_t>(samples.size());
  return BiometricMean{static_cast<int>(round_half_away(sum, n)), static_cast<int>(n)};
}

std::optional<std::pair<SleepStage, std::int64_t>> dominant_sleep_stage(
    const std::array<std::int64_t, 4>& stage_seconds) {
  static constexpr std::array<SleepStage, 4> kPrecedence = {
      SleepStage::deep, SleepStage::rem, SleepStage::light, SleepStage::awake};
  std::int64_t total = 0;
  std::optional<SleepStage> best;
  for (SleepStage stage : kPrecedence) {
    const std::int64_t s = stage_seconds[index_of(stage)];
    total += s;
    if (s > 0 && (!best || s > stage_seconds[index_of(*best)])) best = stage;
  }
  if (!best) return std::nullopt;
  return std::make_pair(*best, total);
}

namespace {

std::optional<std::int64_t> item_value(const CanonicalFrame& f, FrameItem item) {
  switch (item) {
    case FrameItem::steps: return f.steps;
    case FrameItem::activity: return f.activity_minutes;
    case FrameItem::exercise: return f.exercise_minutes;
    case FrameItem::heart_rate: return f.heart_rate_bpm;
    case FrameItem::spo2: return f.spo2_percent;
    case FrameItem::sleep: return f.sleep_minutes;
  }
  return std::nullopt;
}

void copy_item(CanonicalFrame& to, const CanonicalFrame& from, FrameItem item) {
  switch (item) {
    case FrameItem::steps: to.steps = from.steps; break;
    case FrameItem::activity: to.activity_minutes = from.activity_minutes; break;
    case FrameItem::exercise: to.exercise_minutes = from.exercise_minutes; break;
    case FrameItem::heart_rate:
      to.heart_rate_bpm = from.heart_rate_bpm;
      to.heart_rate_samples = from.heart_rate_samples;
      break;
    case FrameItem::spo2:
      to.spo2_percent = from.spo2_percent;
      to.spo2_samples = from.spo2_samples;
      break;
    case FrameItem::sleep:
      to.sleep_minutes = from.sleep_minutes;
      to.sleep_stage = from.sleep_stage;
      break;
  }
}

}  // namespace

CanonicalFrame merge_sources(
    std::span<const std::pair<VendorKind, CanonicalFrame>> vendor_frames,
    const MergePolicy& policy, std::vector<Conflict>* conflicts) {
  CanonicalFrame merged;
  if (vendor_frames.empty()) return merged;
  merged.window_start = vendor_frames.front().second.window_start;
  for (FrameItem item : kAllFrameItems) {
    std::optional<VendorKind> winner;
    for (VendorKind vendor : policy.priority_for(item)) {
      for (const auto& [v, frame] : vendor_frames) {
        if (v != vendor || !item_value(frame, item)) continue;
        if (!winner) {
          winner = vendor;
          copy_item(merged, frame, item);
          merged.sources[index_of(item)] = vendor;
        } else if (conflicts) {
          conflicts->push_back({merged.window_start, item, *winner, vendor});
        }
      }
    }
  }
  return merged;
}

IntegrationResult integrate_traced(std::span<const RawRecord> records,
                                   const WindowGrid& grid,
                                   const MergePolicy& policy) {
  policy.validate();
  if (records.empty()) {
    throw Error(ErrorCode::empty_dataset, "no records to integrate");
  }
  IntegrationResult result;
  IntegrationTrace& trace = result.trace;
  trace.record_minutes.assign(records.size(), 0);

  std::array<VendorWindows, 4> windows;
  std::map<std::tuple<Date, VendorKind, SleepStage>, int> day_stages;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const RawRecord& rec = records[i];
    VendorTotals& totals = trace.vendors[index_of(rec.vendor)];
    VendorWindows& vw = windows[index_of(rec.vendor)];

    if (rec.day_level) {
      if (rec.item == ItemKind::sleep_stage && rec.stage) {
        day_stages[{rec.start.date(), rec.vendor, *rec.stage}] +=
            static_cast<int>(rec.value.value_or(0));
      }
      continue;
    }
    if (!is_span_item(rec.item)) {
      if (!rec.value) inconsistent("biometric record without value");
      WindowAcc& acc = vw[grid.window_index(rec.start)];
      (rec.item == ItemKind::heart_rate ? acc.heart_rates : acc.spo2)
          .push_back(*rec.value);
      continue;
    }

    if (!rec.end) inconsistent("span record without end");
    const auto decomposition = overlap_decomposition(rec.start, *rec.end, grid);
    for (const Allocation& a : allocate_span_quantity(rec, decomposition, i)) {
      if (a.item != ItemKind::steps) continue;
      WindowAcc& acc = vw[grid.window_index(a.window_start)];
      acc.steps += a.amount;
      acc.has_steps = true;
      totals.raw_steps += a.amount;
    }
    if (rec.item == ItemKind::steps) continue;

    // Minutes per record are apportioned so the record's rounded total is
    // conserved across its windows.
    std::vector<std::int64_t> weights;
    weights.reserve(decomposition.size());
    for (const auto& w : decomposition) weights.push_back(w.overlap_seconds);
    const std::int64_t minutes =
        round_half_away(rec.span_seconds(), kSecondsPerMinute);
    const auto shares = largest_remainder(minutes, weights);
    trace.record_minutes[i] = minutes;

    const int slot = duration_slot(rec.item);
    if (slot >= 0) totals.record_minutes[static_cast<std::size_t>(slot)] += minutes;
    for (std::size_t k = 0; k < decomposition.size(); ++k) {
      WindowAcc& acc = vw[grid.window_index(decomposition[k].window_start)];
      if (slot >= 0) {
        acc.minutes[static_cast<std::size_t>(slot)] += shares[k];
        acc.has_minutes[static_cast<std::size_t>(slot)] = true;
      } else {
        acc.stage_seconds[index_of(*rec.stage)] += decomposition[k].overlap_seconds;
        acc.stage_minutes += shares[k];
        acc.has_stage = true;
      }
    }
  }

  // Per-vendor frames, pre-merge.
  const int cap = grid.interval_minutes();
  std::vector<std::int64_t> all_windows;
  std::array<std::map<std::int64_t, CanonicalFrame>, 4> vendor_frames;
  for (VendorKind vendor : kAllVendors) {
    VendorTotals& totals = trace.vendors[index_of(vendor)];
    for (auto& [index, acc] : windows[index_of(vendor)]) {
      CanonicalFrame f;
      f.window_start = grid.window_start(index);
      if (acc.has_steps) {
        f.steps = acc.steps;
        totals.frame_steps += acc.steps;
      }
      std::array<std::optional<int>, 3> mins;
      for (std::size_t s = 0; s < 3; ++s) {
        if (!acc.has_minutes[s]) continue;
        const std::int64_t kept = std::min<std::int64_t>(acc.minutes[s], cap);
        totals.frame_minutes[s] += kept;
        totals.clamped_minutes[s] += acc.minutes[s] - kept;
        mins[s] = static_cast<int>(kept);
      }
      f.activity_minutes = mins[0];
      f.exercise_minutes = mins[1];
      if (mins[2]) {
        f.sleep_minutes = mins[2];
      } else if (acc.has_stage) {
        f.sleep_minutes = static_cast<int>(std::min<std::int64_t>(acc.stage_minutes, cap));
      }
      if (acc.has_stage && f.sleep_minutes && *f.sleep_minutes > 0) {
        if (auto dominant = dominant_sleep_stage(acc.stage_seconds)) {
          f.sleep_stage = dominant->first;
        }
      }
      if (auto hr = average_biometric(acc.heart_rates)) {
        f.heart_rate_bpm = hr->value;
        f.heart_rate_samples = hr->sample_count;
      }
      if (auto sp = average_biometric(acc.spo2)) {
        f.spo2_percent = sp->value;
        f.spo2_samples = sp->sample_count;
      }
      for (FrameItem item : kAllFrameItems) {
        if (f.has(item)) f.sources[index_of(item)] = vendor;
      }
      if (f.empty()) continue;
      all_windows.push_back(index);
      vendor_frames[index_of(vendor)].emplace(index, std::move(f));
    }
  }
  std::sort(all_windows.begin(), all_windows.end());
  all_windows.erase(std::unique(all_windows.begin(), all_windows.end()),
                    all_windows.end());

  Dataset& ds = result.dataset;
  ds.timezone = "UTC";
  ds.grid = grid;
  ds.frames.reserve(all_windows.size());
  std::vector<std::pair<VendorKind, CanonicalFrame>> present;
  for (std::int64_t index : all_windows) {
    present.clear();
    for (VendorKind vendor : kAllVendors) {
      auto& frames = vendor_frames[index_of(vendor)];
      auto it = frames.find(index);
      if (it != frames.end()) present.emplace_back(vendor, it->second);
    }
    CanonicalFrame merged = merge_sources(present, policy, &trace.conflicts);
    if (!merged.empty()) ds.frames.push_back(std::move(merged));
  }
  for (const auto& [key, minutes] : day_stages) {
    const auto& [date, vendor, stage] = key;
    ds.day_stage_totals.push_back({date, vendor, stage, minutes});
  }
  if (ds.frames.empty()) {
    throw Error(ErrorCode::empty_dataset, "no record falls on the window grid");
  }
  return result;
}

Dataset integrate(std::span<const RawRecord> records, const WindowGrid& grid,
                  const MergePolicy& policy) {
  return integrate_traced(records, grid, policy).dataset;
}

std::vector<DailySummary> daily_rollup(const Dataset& dataset) {
  std::vector<DailySummary> out;
  const auto span = dataset.collection_span();
  if (!span) return out;
  for (Date d = span->first; d <= span->last; d = d.next()) {
    DailySummary s;
    s.date = d;
    std::int64_t hr_weighted = 0, hr_n = 0, spo2_weighted = 0, spo2_n = 0;
    for (const CanonicalFrame& f : dataset.frames_on(d)) {
      ++s.nonempty_windows;
      s.total_steps += f.steps.value_or(0);
      s.total_sleep_minutes += f.sleep_minutes.value_or(0);
      s.total_activity_minutes += f.activity_minutes.value_or(0);
      s.total_exercise_minutes += f.exercise_minutes.value_or(0);
      if (f.heart_rate_bpm) {
        const int n = std::max(1, f.heart_rate_samples);
        hr_weighted += std::int64_t{*f.heart_rate_bpm} * n;
        hr_n += n;
      }
      if (f.spo2_percent) {
        const int n = std::max(1, f.spo2_samples);
        spo2_weighted += std::int64_t{*f.spo2_percent} * n;
        spo2_n += n;
      }
    }
    if (hr_n > 0) s.mean_heart_rate_bpm = static_cast<int>(round_half_away(hr_weighted, hr_n));
    if (spo2_n > 0) s.mean_spo2_percent = static_cast<int>(round_half_away(spo2_weighted, spo2_n));
    s.wear_minutes = s.nonempty_windows * dataset.grid.interval_minutes();

    std::optional<VendorKind> day_vendor;
    for (const DayStageTotal& t : dataset.day_stage_totals) {
      if (t.date != d) continue;
      if (!day_vendor) day_vendor = t.vendor;
      if (t.vendor != *day_vendor) continue;
      auto& slot = s.day_level_stage_minutes[index_of(t.stage)];
      slot = slot.value_or(0) + t.minutes;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace vital
