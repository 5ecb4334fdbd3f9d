#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vital::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return VITAL_FIXTURE_DIR; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path scratch_dir(std::string_view tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  fs::path dir = fs::temp_directory_path() /
                 ("vital-" + std::string(tag) + "-" + std::to_string(rng() % 1000000007));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

LocalTimestamp ts(std::string_view text) {
  auto t = LocalTimestamp::parse(text);
  if (!t) throw std::invalid_argument("bad timestamp " + std::string(text));
  return *t;
}

Date day(std::string_view text) {
  auto d = Date::parse(text);
  if (!d) throw std::invalid_argument("bad date " + std::string(text));
  return *d;
}

RawRecord span(VendorKind vendor, ItemKind item, LocalTimestamp start, LocalTimestamp end,
               std::optional<std::int64_t> value) {
  RawRecord r;
  r.vendor = vendor;
  r.item = item;
  r.start = start;
  r.end = end;
  r.value = value;
  if (!value && item != ItemKind::steps) {
    const std::int64_t secs = end.seconds() - start.seconds();
    r.value = (secs + 30) / 60;
  }
  return r;
}

RawRecord stage_span(VendorKind vendor, SleepStage stage, LocalTimestamp start,
                     LocalTimestamp end) {
  RawRecord r = span(vendor, ItemKind::sleep_stage, start, end);
  r.stage = stage;
  return r;
}

RawRecord point(VendorKind vendor, ItemKind item, LocalTimestamp at, std::int64_t value) {
  RawRecord r;
  r.vendor = vendor;
  r.item = item;
  r.start = at;
  r.value = value;
  return r;
}

namespace {

template <class T>
T pick(std::mt19937_64& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

VendorKind vendor_for(std::mt19937_64& rng, ItemKind item) {
  for (;;) {
    const VendorKind v = kAllVendors[pick<std::size_t>(rng, 0, 3)];
    if (vendor_exports(v, item)) return v;
  }
}

constexpr ItemKind kWindowItems[] = {
    ItemKind::steps,          ItemKind::activity_duration, ItemKind::exercise_duration,
    ItemKind::heart_rate,     ItemKind::oxygen_saturation, ItemKind::sleep_duration,
    ItemKind::sleep_stage};

}  // namespace

std::vector<RawRecord> random_records(std::mt19937_64& rng, const RandomRecordOptions& o) {
  const LocalTimestamp origin = ts("2024-03-01 00:00:00");
  const int n = pick(rng, o.min_count, o.max_count);
  const VendorKind only = kAllVendors[pick<std::size_t>(rng, 0, 1)];
  std::vector<RawRecord> out;
  for (int i = 0; i < n; ++i) {
    const ItemKind item = kWindowItems[pick<std::size_t>(rng, 0, 6)];
    const VendorKind vendor = o.single_vendor ? only : vendor_for(rng, item);
    const LocalTimestamp start =
        origin.plus_seconds(pick<std::int64_t>(rng, 0, std::int64_t{o.days} * kSecondsPerDay));
    if (!is_span_item(item)) {
      const std::int64_t value = item == ItemKind::heart_rate ? pick<std::int64_t>(rng, 40, 200)
                                                              : pick<std::int64_t>(rng, 85, 100);
      out.push_back(point(vendor, item, start, value));
      continue;
    }
    const LocalTimestamp end = start.plus_seconds(pick<std::int64_t>(rng, 1, o.max_span_seconds));
    if (item == ItemKind::sleep_stage) {
      out.push_back(stage_span(vendor, kAllStages[pick<std::size_t>(rng, 0, 3)], start, end));
    } else if (item == ItemKind::steps) {
      out.push_back(span(vendor, item, start, end, pick<std::int64_t>(rng, 0, 5000)));
    } else {
      RawRecord r = span(vendor, item, start, end);
      if (item == ItemKind::exercise_duration && pick(rng, 0, 1) == 1) {
        r.exercise_steps = pick<std::int64_t>(rng, 0, 4000);
      }
      out.push_back(r);
    }
  }
  return out;
}

Dataset random_dataset(std::mt19937_64& rng, const WindowGrid& grid, int max_frames) {
  Dataset ds;
  ds.dataset_id = "ds-random";
  ds.timezone = "UTC+9";
  ds.grid = grid;
  const LocalTimestamp origin = ts("2024-01-01 00:00:00");
  const std::int64_t base = grid.window_index(origin);
  const int frames = pick(rng, 1, max_frames);
  const std::int64_t range = std::int64_t{grid.windows_per_day()} * 5;
  std::vector<std::int64_t> indices;
  for (int i = 0; i < frames; ++i) indices.push_back(base + pick<std::int64_t>(rng, 0, range));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

  const int cap = grid.interval_minutes();
  for (std::int64_t index : indices) {
    CanonicalFrame f;
    f.window_start = grid.window_start(index);
    const int mask = pick(rng, 1, 63);
    auto vendor = [&] { return kAllVendors[pick<std::size_t>(rng, 0, 3)]; };
    auto set_source = [&](FrameItem item) { f.sources[index_of(item)] = vendor(); };
    if (mask & 1) { f.steps = pick<std::int64_t>(rng, 0, 3000); set_source(FrameItem::steps); }
    if (mask & 2) { f.activity_minutes = pick(rng, 0, cap); set_source(FrameItem::activity); }
    if (mask & 4) { f.exercise_minutes = pick(rng, 0, cap); set_source(FrameItem::exercise); }
    if (mask & 8) {
      f.heart_rate_bpm = pick(rng, 30, 230);
      f.heart_rate_samples = 1;
      set_source(FrameItem::heart_rate);
    }
    if (mask & 16) {
      f.spo2_percent = pick(rng, 0, 100);
      f.spo2_samples = 1;
      set_source(FrameItem::spo2);
    }
    if (mask & 32) {
      f.sleep_minutes = pick(rng, 0, cap);
      if (*f.sleep_minutes > 0 && pick(rng, 0, 2) > 0) {
        f.sleep_stage = kAllStages[pick<std::size_t>(rng, 0, 3)];
      }
      set_source(FrameItem::sleep);
    }
    if (pick(rng, 0, 3) == 0) {
      const VendorKind v = vendor();
      for (auto& s : f.sources) {
        if (s) s = v;
      }
    }
    ds.frames.push_back(f);
  }
  return ds;
}

std::vector<RawRecord> wear_scenario(Date first, const std::vector<int>& windows) {
  std::vector<RawRecord> out;
  Date d = first;
  for (int count : windows) {
    const LocalTimestamp start = LocalTimestamp::start_of(d);
    for (int w = 0; w < count; ++w) {
      out.push_back(point(VendorKind::samsung, ItemKind::heart_rate,
                          start.plus_seconds(std::int64_t{w} * 600 + 60), 60 + w % 40));
    }
    d = d.next();
  }
  return out;
}

std::string wear_scenario_samsung_csv(Date first, const std::vector<int>& windows) {
  std::string out = "heart_rate.start_time,heart_rate.end_time,heart_rate.heart_rate\n";
  for (const RawRecord& r : wear_scenario(first, windows)) {
    const std::string t = r.start.to_string() + ".000";
    out += t + "," + t + "," + std::to_string(*r.value) + "\n";
  }
  return out;
}

StepSleepCorpus step_sleep_corpus(std::uint64_t seed, Date first, int days,
                                  std::int64_t mean_steps) {
  std::mt19937_64 rng(seed);
  StepSleepCorpus c;
  c.first = first;
  c.days = days;
  c.daily_sleep_minutes = 240;
  std::int64_t total = 0;
  for (int i = 0; i + 1 < days; ++i) {
    c.daily_steps.push_back(mean_steps + pick<std::int64_t>(rng, -4000, 4000));
    total += c.daily_steps.back();
  }
  c.daily_steps.push_back(mean_steps * days - total);

  constexpr int kSpans = 12;
  constexpr std::int64_t kSpanSeconds = 80 * 60;  // 07:00 to 23:00
  Date d = first;
  for (int i = 0; i < days; ++i) {
    const LocalTimestamp midnight = LocalTimestamp::start_of(d);
    const std::int64_t t = c.daily_steps[static_cast<std::size_t>(i)];
    for (int k = 0; k < kSpans; ++k) {
      const std::int64_t share = t / kSpans + (k == 0 ? t % kSpans : 0);
      const LocalTimestamp s = midnight.plus_seconds(7 * 3600 + k * kSpanSeconds);
      c.records.push_back(span(VendorKind::samsung, ItemKind::steps, s,
                               s.plus_seconds(kSpanSeconds), share));
    }
    c.records.push_back(span(VendorKind::samsung, ItemKind::sleep_duration,
                             midnight.plus_seconds(3600), midnight.plus_seconds(5 * 3600)));
    d = d.next();
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> step_sleep_samsung_files(
    const StepSleepCorpus& corpus) {
  std::string steps = "step_count.start_time,step_count.end_time,step_count.count\n";
  std::string sleep = "sleep.start_time,sleep.end_time,sleep.sleep_duration\n";
  for (const RawRecord& r : corpus.records) {
    const std::string a = r.start.to_string() + ".000";
    const std::string b = r.end->to_string() + ".000";
    if (r.item == ItemKind::steps) {
      steps += a + "," + b + "," + std::to_string(*r.value) + "\n";
    } else {
      sleep += a + "," + b + "," + std::to_string(r.span_seconds() * 1000) + "\n";
    }
  }
  return {{"samsung_steps.csv", steps}, {"samsung_sleep.csv", sleep}};
}

std::vector<RawRecord> throughput_corpus(Date first, int days) {
  std::mt19937_64 rng(114);
  std::vector<RawRecord> out;
  out.reserve(static_cast<std::size_t>(days) * 9000);
  Date d = first;
  for (int i = 0; i < days; ++i) {
    const LocalTimestamp midnight = LocalTimestamp::start_of(d);
    for (int minute = 5 * 60; minute < 24 * 60; ++minute) {
      const LocalTimestamp t = midnight.plus_seconds(std::int64_t{minute} * 60);
      for (VendorKind v : kAllVendors) {
        out.push_back(point(v, ItemKind::heart_rate, t.plus_seconds(pick(rng, 0, 59)),
                            pick<std::int64_t>(rng, 50, 150)));
        out.push_back(span(v, ItemKind::steps, t, t.plus_seconds(60),
                           pick<std::int64_t>(rng, 0, 120)));
      }
    }
    for (VendorKind v : {VendorKind::samsung, VendorKind::apple, VendorKind::fitbit}) {
      for (int h = 0; h < 6; ++h) {
        out.push_back(point(v, ItemKind::oxygen_saturation,
                            midnight.plus_seconds(h * 3600 + 120), pick<std::int64_t>(rng, 90, 99)));
      }
    }
    for (VendorKind v : kAllVendors) {
      out.push_back(span(v, ItemKind::sleep_duration, midnight.plus_seconds(3600),
                         midnight.plus_seconds(5 * 3600 + 17)));
      const ItemKind moving = vendor_exports(v, ItemKind::activity_duration)
                                  ? ItemKind::activity_duration
                                  : ItemKind::exercise_duration;
      out.push_back(span(v, moving, midnight.plus_seconds(18 * 3600 + 7), midnight.plus_seconds(19 * 3600)));
    }
    d = d.next();
  }
  return out;
}

}  // namespace vital::testing
