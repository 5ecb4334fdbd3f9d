#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vital/adapters.hpp"
#include "vital/frame.hpp"
#include "vital/grid.hpp"

namespace vital::testing {

std::filesystem::path fixture_dir();
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(std::string_view tag);

/// Canonical `YYYY-MM-DD HH:MM:SS`; throws on bad text.
LocalTimestamp ts(std::string_view text);
Date day(std::string_view text);

RawRecord span(VendorKind vendor, ItemKind item, LocalTimestamp start, LocalTimestamp end,
               std::optional<std::int64_t> value = std::nullopt);
RawRecord stage_span(VendorKind vendor, SleepStage stage, LocalTimestamp start,
                     LocalTimestamp end);
RawRecord point(VendorKind vendor, ItemKind item, LocalTimestamp at, std::int64_t value);

struct RandomRecordOptions {
  int min_count = 1;
  int max_count = 60;
  int days = 3;
  std::int64_t max_span_seconds = 5 * 3600;
  bool single_vendor = false;
};

/// Normalized records of every item kind with second-resolution spans.
std::vector<RawRecord> random_records(std::mt19937_64& rng,
                                      const RandomRecordOptions& options = {});

/// Valid dataset with non-empty frames and sample counts of 1.
Dataset random_dataset(std::mt19937_64& rng, const WindowGrid& grid, int max_frames = 200);

/// One heart-rate sample in each of the first `windows[d]` 10-minute windows
/// of day d, starting on `first`.
std::vector<RawRecord> wear_scenario(Date first, const std::vector<int>& windows);

/// The wear scenario as a Samsung heart-rate export.
std::string wear_scenario_samsung_csv(Date first, const std::vector<int>& windows);

struct StepSleepCorpus {
  Date first;
  int days = 0;
  std::vector<std::int64_t> daily_steps;
  std::int64_t daily_sleep_minutes = 0;
  std::vector<RawRecord> records;
};

/// `days` days whose exact daily step totals average `mean_steps` and with
/// one sleep episode 01:00-05:00 per day.
StepSleepCorpus step_sleep_corpus(std::uint64_t seed, Date first, int days,
                                  std::int64_t mean_steps);

/// Samsung steps and sleep exports for a StepSleepCorpus.
std::vector<std::pair<std::string, std::string>> step_sleep_samsung_files(
    const StepSleepCorpus& corpus);

/// Four vendors, one sample per minute per biometric, many short step spans.
std::vector<RawRecord> throughput_corpus(Date first, int days);

}  // namespace vital::testing
