#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vital/items.hpp"
#include "vital/timestamp.hpp"
#include "vital/timezone.hpp"

namespace vital {

struct SourceLine {
  std::string file;
  int line = 0;

  friend bool operator==(const SourceLine&, const SourceLine&) = default;
};

/// One vendor measurement or span before integration.
///
/// Span items (steps, durations, sleep) carry `end`; point items (heart rate,
/// oxygen saturation) have no end once normalized. `value` holds the step
/// count, bpm, percent, or (after normalize_unit) the duration in minutes.
/// Exercise rows may also report steps in `exercise_steps`.
struct RawRecord {
  VendorKind vendor = VendorKind::samsung;
  ItemKind item = ItemKind::steps;
  LocalTimestamp start;
  std::optional<LocalTimestamp> end;
  std::optional<std::int64_t> value;
  std::optional<double> real_value;  // fractional input awaiting rounding
  std::optional<std::int64_t> exercise_steps;
  std::optional<SleepStage> stage;
  bool day_level = false;  // daily aggregate; never placed on the window grid
  SourceLine source;

  std::int64_t span_seconds() const {
    return end ? end->seconds() - start.seconds() : 0;
  }
};

/// Field-wise equality ignoring `source`.
bool same_measurement(const RawRecord& a, const RawRecord& b);

struct Diagnostic {
  std::string file;
  int line = 0;
  std::string code;
  std::string message;

  /// `file:line: code: message`
  std::string to_string() const;
};

enum class ColumnRole {
  start,     // full timestamp
  end,       // full timestamp
  date,      // calendar date, combined with `time`
  time,      // time of day of the start
  end_time,  // time of day of the end, same date unless it wraps midnight
  value,
  steps,     // exercise step count
  duration,
  stage,
  label,     // free text, ignored on input
};

enum class TimestampFormat {
  samsung,     // YYYY-MM-DD HH:MM:SS.mmm
  apple,       // YYYY-MM-DD HH:MM:SS +HHMM
  fitbit_us,   // MM/DD/YY HH:MM:SS
  fitbit_iso,  // YYYY-MM-DDTHH:MM:SS.mmm
  xiaomi,      // separate YYYY-MM-DD and HH:MM[:SS] columns
};

enum class DurationUnit { milliseconds, seconds, minutes };

struct ColumnSpec {
  std::string name;
  ColumnRole role;
};

/// File layout for one vendor's export of one item kind.
struct FileSchema {
  std::string id;
  VendorKind vendor = VendorKind::samsung;
  ItemKind item = ItemKind::steps;
  std::vector<ColumnSpec> columns;  // header order used when rendering
  TimestampFormat timestamp_format = TimestampFormat::samsung;
  DurationUnit duration_unit = DurationUnit::minutes;
  /// Span length for rows with a start only (per-minute step series).
  std::int64_t implied_span_seconds = 0;
  bool fractional_value = false;
  /// Multiplier from the file's unit to the canonical one (fraction to percent).
  double value_scale = 1.0;
  bool day_level = false;

  const ColumnSpec* column(ColumnRole role) const;
};

struct XiaomiOptions {
  /// Header names treated as oxygen saturation, which Zepp Life exports
  /// are not used for. Matched case-insensitively.
  std::vector<std::string> spo2_like_columns = {"spo2", "oxygen", "bloodoxygen",
                                                "oxygen_saturation"};
};

struct AdapterConfig {
  std::vector<FileSchema> schemas;
  /// Samsung integer stage codes. The shipped defaults are placeholders and
  /// are not an authoritative vendor mapping.
  std::map<std::int64_t, SleepStage> samsung_sleep_stage_codes;
  /// Lower-case vendor tokens mapped onto canonical stages.
  std::map<std::string, SleepStage> stage_synonyms;
  XiaomiOptions xiaomi;

  /// The documented fixture schema for every vendor and item.
  static AdapterConfig defaults();

  /// Throws invalid-config when a vendor's item lacks a schema or a schema
  /// emits an item the vendor does not export.
  void validate() const;
};

/// Which items each vendor's companion app exports.
bool vendor_exports(VendorKind vendor, ItemKind item);

/// Splits a header row into trimmed column names (BOM stripped).
std::vector<std::string> header_columns(std::string_view header_line);

const FileSchema& detect_schema(std::string_view file_name,
                                std::string_view header_line,
                                const AdapterConfig& config);

/// Unique vendor whose schema matches the header. Throws unknown-format or
/// ambiguous-format.
VendorKind detect_vendor(std::string_view file_name,
                         std::string_view header_line,
                         const AdapterConfig& config);

/// Milliseconds are truncated; offset-bearing input is converted to
/// `dataset_tz`. Throws parse-error.
LocalTimestamp parse_timestamp(VendorKind vendor, std::string_view text,
                               const TimeZone& dataset_tz,
                               const SourceLine& where = {});

SleepStage map_sleep_stage(VendorKind vendor,
                           const std::variant<std::string_view, std::int64_t>& token,
                           const AdapterConfig& config);

struct ParseResult {
  std::string schema_id;
  std::vector<RawRecord> records;
  std::vector<Diagnostic> diagnostics;  // ordered by line
  int data_rows = 0;                    // non-blank rows after the header
};

/// Parses one vendor export. Malformed rows become diagnostics; only an
/// encoding failure (encoding-error) or a header that fits none of the
/// vendor's schemas (schema-error) aborts.
ParseResult parse_export(VendorKind vendor, std::string_view content,
                         const AdapterConfig& config,
                         const TimeZone& dataset_tz,
                         std::string_view file_name = "<input>");

/// Converts units to the canonical ones. Throws invalid-value.
RawRecord normalize_unit(const RawRecord& record);

/// Writes records back out in the schema's layout.
std::string render_export(const FileSchema& schema,
                          const std::vector<RawRecord>& records,
                          const TimeZone& dataset_tz,
                          const AdapterConfig& config);

const FileSchema& find_schema(const AdapterConfig& config, std::string_view id);

struct IngestResult {
  std::string file_name;
  std::optional<VendorKind> vendor;
  std::string schema_id;
  std::vector<RawRecord> records;  // normalized
  std::vector<Diagnostic> diagnostics;
};

/// detect + parse + normalize for one file. Whole-file failures are reported
/// as a single diagnostic and an empty record set.
IngestResult ingest_file(std::string_view file_name, std::string_view content,
                         const AdapterConfig& config,
                         const TimeZone& dataset_tz);

}  // namespace vital
