#include "vital/adapters.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>
#include <unordered_set>

#include "vital/csv.hpp"
#include "vital/error.hpp"
#include "vital/rounding.hpp"

namespace vital {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool digits_at(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

std::optional<LocalTimestamp> make_ts(int y, int mo, int d, int h, int mi,
                                      int s) {
  if (mo < 1 || mo > 12 || d < 1 || d > 31 ||
      !is_valid_civil_date(y, static_cast<unsigned>(mo),
                           static_cast<unsigned>(d))) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  return LocalTimestamp::from_parts(y, static_cast<unsigned>(mo),
                                    static_cast<unsigned>(d), h, mi, s);
}

// `YYYY-MM-DD<sep>HH:MM:SS` prefix.
std::optional<LocalTimestamp> parse_iso_prefix(std::string_view t, char sep) {
  int y, mo, d, h, mi, s;
  if (t.size() < 19 || t[4] != '-' || t[7] != '-' || t[10] != sep ||
      t[13] != ':' || t[16] != ':') {
    return std::nullopt;
  }
  if (!digits_at(t, 0, 4, y) || !digits_at(t, 5, 2, mo) ||
      !digits_at(t, 8, 2, d) || !digits_at(t, 11, 2, h) ||
      !digits_at(t, 14, 2, mi) || !digits_at(t, 17, 2, s)) {
    return std::nullopt;
  }
  return make_ts(y, mo, d, h, mi, s);
}

// Accepts an empty tail or `.` followed by 1-9 digits; the fraction is dropped.
bool fraction_tail(std::string_view tail) {
  if (tail.empty()) return true;
  if (tail[0] != '.' || tail.size() < 2 || tail.size() > 10) return false;
  return std::all_of(tail.begin() + 1, tail.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<LocalTimestamp> parse_samsung(std::string_view t) {
  auto ts = parse_iso_prefix(t, ' ');
  if (!ts || !fraction_tail(t.substr(19))) return std::nullopt;
  return ts;
}

std::optional<LocalTimestamp> parse_apple(std::string_view t,
                                          const TimeZone& tz) {
  auto ts = parse_iso_prefix(t, ' ');
  if (!ts || t.size() < 21 || t[19] != ' ') return std::nullopt;
  int offset = 0;
  if (!parse_utc_offset(t.substr(20), offset)) return std::nullopt;
  return ts->plus_seconds(tz.offset_seconds() - offset);
}

std::optional<LocalTimestamp> parse_fitbit_us(std::string_view t) {
  int mo, d, yy, h, mi, s;
  if (t.size() != 17 || t[2] != '/' || t[5] != '/' || t[8] != ' ' ||
      t[11] != ':' || t[14] != ':') {
    return std::nullopt;
  }
  if (!digits_at(t, 0, 2, mo) || !digits_at(t, 3, 2, d) ||
      !digits_at(t, 6, 2, yy) || !digits_at(t, 9, 2, h) ||
      !digits_at(t, 12, 2, mi) || !digits_at(t, 15, 2, s)) {
    return std::nullopt;
  }
  return make_ts(2000 + yy, mo, d, h, mi, s);
}

std::optional<LocalTimestamp> parse_fitbit_iso(std::string_view t) {
  auto ts = parse_iso_prefix(t, 'T');
  if (!ts || !fraction_tail(t.substr(19))) return std::nullopt;
  return ts;
}

// `YYYY-MM-DD HH:MM` or `YYYY-MM-DD HH:MM:SS`.
std::optional<LocalTimestamp> parse_xiaomi(std::string_view t) {
  if (t.size() == 16) {
    std::string padded(t);
    padded += ":00";
    return parse_iso_prefix(padded, ' ');
  }
  if (t.size() == 19) return parse_iso_prefix(t, ' ');
  return std::nullopt;
}

std::optional<LocalTimestamp> parse_in_format(TimestampFormat format,
                                              std::string_view text,
                                              const TimeZone& tz) {
  switch (format) {
    case TimestampFormat::samsung: return parse_samsung(text);
    case TimestampFormat::apple: return parse_apple(text, tz);
    case TimestampFormat::fitbit_us: return parse_fitbit_us(text);
    case TimestampFormat::fitbit_iso: return parse_fitbit_iso(text);
    case TimestampFormat::xiaomi: return parse_xiaomi(text);
  }
  return std::nullopt;
}

std::string format_timestamp(TimestampFormat format, LocalTimestamp ts,
                             const TimeZone& tz) {
  const CivilTime c = ts.to_civil();
  char buf[48];
  switch (format) {
    case TimestampFormat::samsung:
      std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d.000",
                    c.year, c.month, c.day, c.hour, c.minute, c.second);
      break;
    case TimestampFormat::apple:
      std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d %s",
                    c.year, c.month, c.day, c.hour, c.minute, c.second,
                    format_utc_offset(tz.offset_seconds()).c_str());
      break;
    case TimestampFormat::fitbit_us:
      if (c.year < 2000 || c.year > 2099) {
        throw Error(ErrorCode::invalid_value,
                    "two-digit year cannot represent " + ts.to_string());
      }
      std::snprintf(buf, sizeof buf, "%02u/%02u/%02d %02d:%02d:%02d", c.month,
                    c.day, c.year % 100, c.hour, c.minute, c.second);
      break;
    case TimestampFormat::fitbit_iso:
      std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.000",
                    c.year, c.month, c.day, c.hour, c.minute, c.second);
      break;
    case TimestampFormat::xiaomi:
      return ts.to_string();
  }
  return buf;
}

std::string time_of_day(LocalTimestamp ts) {
  return ts.to_string().substr(11);
}

struct RowError {
  std::string code;
  std::string message;
};

std::int64_t parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw RowError{"parse-error", std::string(what) + " is not an integer: '" +
                                      std::string(text) + "'"};
  }
  return v;
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw RowError{"parse-error", std::string(what) + " is not a number: '" +
                                      std::string(text) + "'"};
  }
  return v;
}

std::int64_t duration_seconds(std::int64_t amount, DurationUnit unit) {
  switch (unit) {
    case DurationUnit::milliseconds: return amount / 1000;
    case DurationUnit::seconds: return amount;
    case DurationUnit::minutes: return amount * 60;
  }
  return amount;
}

std::int64_t render_duration(std::int64_t seconds, DurationUnit unit) {
  switch (unit) {
    case DurationUnit::milliseconds: return seconds * 1000;
    case DurationUnit::seconds: return seconds;
    case DurationUnit::minutes:
      if (seconds % 60 != 0) {
        throw Error(ErrorCode::invalid_value,
                    "span of " + std::to_string(seconds) +
                        " s cannot be written in whole minutes");
      }
      return seconds / 60;
  }
  return seconds;
}

struct BoundSchema {
  const FileSchema* schema;
  std::vector<int> column_index;  // header position per schema column
};

BoundSchema bind(const FileSchema& schema,
                 const std::vector<std::string>& header) {
  BoundSchema b{&schema, {}};
  for (const auto& col : schema.columns) {
    auto it = std::find(header.begin(), header.end(), col.name);
    b.column_index.push_back(
        it == header.end() ? -1 : static_cast<int>(it - header.begin()));
  }
  return b;
}

bool matches(const FileSchema& schema, const std::vector<std::string>& header) {
  return std::all_of(schema.columns.begin(), schema.columns.end(),
                     [&](const ColumnSpec& c) {
                       return std::find(header.begin(), header.end(), c.name) !=
                              header.end();
                     });
}

std::vector<const FileSchema*> candidates(std::string_view file_name,
                                          std::string_view header_line,
                                          const AdapterConfig& config) {
  const auto header = header_columns(header_line);
  std::vector<const FileSchema*> found;
  if (header.empty() || (header.size() == 1 && header[0].empty())) return found;
  for (const auto& s : config.schemas) {
    if (matches(s, header)) found.push_back(&s);
  }
  if (found.size() > 1) {
    // A vendor name in the file name settles an otherwise ambiguous header.
    const std::string name = lower(file_name);
    std::vector<const FileSchema*> named;
    for (const auto* s : found) {
      if (name.find(to_string(s->vendor)) != std::string::npos) named.push_back(s);
    }
    if (!named.empty()) found = std::move(named);
  }
  return found;
}

struct RowContext {
  const BoundSchema& bound;
  const AdapterConfig& config;
  const TimeZone& tz;
  const std::vector<std::string>& fields;
  const SourceLine& where;

  std::optional<std::string_view> field(ColumnRole role) const {
    const auto& cols = bound.schema->columns;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].role != role) continue;
      const int idx = bound.column_index[i];
      if (idx < 0 || static_cast<std::size_t>(idx) >= fields.size()) {
        return std::nullopt;
      }
      return std::string_view(fields[static_cast<std::size_t>(idx)]);
    }
    return std::nullopt;
  }

  std::string_view required(ColumnRole role, std::string_view what) const {
    auto f = field(role);
    if (!f || trim(*f).empty()) {
      throw RowError{"missing-field", std::string(what) + " is empty"};
    }
    return trim(*f);
  }

  LocalTimestamp timestamp(std::string_view text) const {
    auto ts = parse_in_format(bound.schema->timestamp_format, text, tz);
    if (!ts) {
      throw RowError{"parse-error",
                     "malformed timestamp '" + std::string(text) + "'"};
    }
    return *ts;
  }
};

RawRecord parse_row(const RowContext& ctx) {
  const FileSchema& schema = *ctx.bound.schema;
  RawRecord rec;
  rec.vendor = schema.vendor;
  rec.item = schema.item;
  rec.source = ctx.where;

  std::optional<Date> date;
  if (schema.column(ColumnRole::date)) {
    const auto text = ctx.required(ColumnRole::date, "date");
    date = Date::parse(text);
    if (!date) {
      throw RowError{"parse-error", "malformed date '" + std::string(text) + "'"};
    }
  }

  if (schema.day_level) {
    rec.day_level = true;
    rec.start = LocalTimestamp::start_of(*date);
    rec.end = LocalTimestamp::start_of(date->next());
  } else if (schema.column(ColumnRole::start)) {
    rec.start = ctx.timestamp(ctx.required(ColumnRole::start, "start time"));
  } else {
    const auto time = ctx.required(ColumnRole::time, "time");
    rec.start = ctx.timestamp(date->to_string() + " " + std::string(time));
  }

  if (schema.column(ColumnRole::stage)) {
    const auto token = ctx.required(ColumnRole::stage, "sleep stage");
    try {
      if (schema.vendor == VendorKind::samsung) {
        rec.stage = map_sleep_stage(schema.vendor, parse_int(token, "stage code"),
                                    ctx.config);
      } else {
        rec.stage = map_sleep_stage(schema.vendor, token, ctx.config);
      }
    } catch (const Error& e) {
      throw RowError{std::string(error_code_name(e.code())), e.what()};
    }
  }

  if (schema.column(ColumnRole::value)) {
    const auto text = ctx.required(ColumnRole::value, "value");
    if (schema.fractional_value) {
      rec.real_value = parse_real(text, "value") * schema.value_scale;
    } else {
      rec.value = parse_int(text, "value");
    }
  }

  if (schema.column(ColumnRole::steps)) {
    if (auto text = ctx.field(ColumnRole::steps); text && !trim(*text).empty()) {
      rec.exercise_steps = parse_int(*text, "steps");
    }
  }

  std::optional<std::int64_t> duration;
  if (schema.column(ColumnRole::duration)) {
    const std::int64_t amount =
        parse_int(ctx.required(ColumnRole::duration, "duration"), "duration");
    if (amount < 0) throw RowError{"invalid-value", "negative duration"};
    duration = duration_seconds(amount, schema.duration_unit);
  }

  if (schema.day_level) {
    rec.value = duration ? *duration / 60 : 0;
    return rec;
  }

  if (!is_span_item(schema.item)) return rec;

  std::optional<LocalTimestamp> end;
  if (schema.column(ColumnRole::end)) {
    end = ctx.timestamp(ctx.required(ColumnRole::end, "end time"));
  } else if (schema.column(ColumnRole::end_time)) {
    const auto time = ctx.required(ColumnRole::end_time, "end time");
    end = ctx.timestamp(date->to_string() + " " + std::string(time));
    if (*end <= rec.start) end = end->plus_seconds(kSecondsPerDay);
  }

  if (end && duration) {
    const std::int64_t span = end->seconds() - rec.start.seconds();
    if (std::llabs(span - *duration) > 1) {
      throw RowError{"duration-mismatch",
                     "duration " + std::to_string(*duration) +
                         " s disagrees with end - start = " +
                         std::to_string(span) + " s"};
    }
  } else if (duration) {
    end = rec.start.plus_seconds(*duration);
  } else if (!end && schema.implied_span_seconds > 0) {
    end = rec.start.plus_seconds(schema.implied_span_seconds);
  }
  if (!end) throw RowError{"span-ambiguous", "row has no end time or duration"};
  if (*end <= rec.start) {
    throw RowError{"degenerate-span", "end " + end->to_string() +
                                          " is not after start " +
                                          rec.start.to_string()};
  }
  rec.end = end;
  return rec;
}

// Key identifying a measurement for duplicate collapsing.
using RecordKey = std::tuple<int, std::int64_t, std::int64_t, std::int64_t,
                             double, std::int64_t, int, bool>;

RecordKey key_of(const RawRecord& r) {
  return {static_cast<int>(r.item),
          r.start.seconds(),
          r.end ? r.end->seconds() : INT64_MIN,
          r.value.value_or(INT64_MIN),
          r.real_value.value_or(-1.0),
          r.exercise_steps.value_or(INT64_MIN),
          r.stage ? static_cast<int>(*r.stage) : -1,
          r.day_level};
}

}  // namespace

bool same_measurement(const RawRecord& a, const RawRecord& b) {
  return a.vendor == b.vendor && a.item == b.item && a.start == b.start &&
         a.end == b.end && a.value == b.value && a.real_value == b.real_value &&
         a.exercise_steps == b.exercise_steps && a.stage == b.stage &&
         a.day_level == b.day_level;
}

std::string Diagnostic::to_string() const {
  return file + ":" + std::to_string(line) + ": " + code + ": " + message;
}

std::vector<std::string> header_columns(std::string_view header_line) {
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  auto fields = split_csv_line(header_line);
  for (auto& f : fields) f = std::string(trim(f));
  return fields;
}

const FileSchema& detect_schema(std::string_view file_name,
                                std::string_view header_line,
                                const AdapterConfig& config) {
  const auto found = candidates(file_name, header_line, config);
  if (found.empty()) {
    throw Error(ErrorCode::unknown_format,
                "no registered export schema matches the header of " +
                    std::string(file_name));
  }
  if (found.size() > 1) {
    std::string ids;
    for (const auto* s : found) ids += (ids.empty() ? "" : ", ") + s->id;
    throw Error(ErrorCode::ambiguous_format,
                "header of " + std::string(file_name) +
                    " matches several schemas: " + ids);
  }
  return *found.front();
}

VendorKind detect_vendor(std::string_view file_name,
                         std::string_view header_line,
                         const AdapterConfig& config) {
  return detect_schema(file_name, header_line, config).vendor;
}

LocalTimestamp parse_timestamp(VendorKind vendor, std::string_view text,
                               const TimeZone& dataset_tz,
                               const SourceLine& where) {
  text = trim(text);
  std::optional<LocalTimestamp> ts;
  switch (vendor) {
    case VendorKind::samsung: ts = parse_samsung(text); break;
    case VendorKind::apple: ts = parse_apple(text, dataset_tz); break;
    case VendorKind::fitbit:
      ts = parse_fitbit_us(text);
      if (!ts) ts = parse_fitbit_iso(text);
      break;
    case VendorKind::xiaomi: ts = parse_xiaomi(text); break;
  }
  if (!ts) {
    std::string prefix =
        where.file.empty() ? "" : where.file + ":" + std::to_string(where.line) + ": ";
    throw Error(ErrorCode::parse_error,
                prefix + "malformed " + std::string(to_string(vendor)) +
                    " timestamp '" + std::string(text) + "'");
  }
  return *ts;
}

SleepStage map_sleep_stage(
    VendorKind vendor, const std::variant<std::string_view, std::int64_t>& token,
    const AdapterConfig& config) {
  if (const auto* code = std::get_if<std::int64_t>(&token)) {
    if (vendor == VendorKind::samsung) {
      auto it = config.samsung_sleep_stage_codes.find(*code);
      if (it != config.samsung_sleep_stage_codes.end()) return it->second;
    }
    throw Error(ErrorCode::unknown_stage,
                "unmapped sleep stage code " + std::to_string(*code) + " for " +
                    std::string(to_string(vendor)));
  }
  const std::string_view text = trim(std::get<std::string_view>(token));
  if (text.empty()) {
    throw Error(ErrorCode::unknown_stage, "empty sleep stage token");
  }
  if (vendor == VendorKind::samsung) {
    std::int64_t code = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), code);
    if (ec == std::errc{} && ptr == text.data() + text.size()) {
      return map_sleep_stage(vendor, code, config);
    }
    throw Error(ErrorCode::unknown_stage,
                "samsung sleep stage must be an integer code, got '" +
                    std::string(text) + "'");
  }
  const std::string folded = lower(text);
  if (auto stage = parse_sleep_stage(folded)) return *stage;
  auto it = config.stage_synonyms.find(folded);
  if (it != config.stage_synonyms.end()) return it->second;
  throw Error(ErrorCode::unknown_stage,
              "unmapped sleep stage '" + std::string(text) + "' for " +
                  std::string(to_string(vendor)));
}

ParseResult parse_export(VendorKind vendor, std::string_view content,
                         const AdapterConfig& config, const TimeZone& dataset_tz,
                         std::string_view file_name) {
  if (!is_valid_utf8(content)) {
    throw Error(ErrorCode::encoding_error,
                std::string(file_name) + " is not valid UTF-8");
  }
  LineReader reader(content);
  std::string_view header_line;
  if (!reader.next(header_line)) header_line = {};
  const auto header = header_columns(header_line);

  const FileSchema* schema = nullptr;
  for (const auto* s : candidates(file_name, header_line, config)) {
    if (s->vendor != vendor) continue;
    if (schema) {
      throw Error(ErrorCode::schema_error,
                  std::string(file_name) + ": header fits several " +
                      std::string(to_string(vendor)) + " schemas");
    }
    schema = s;
  }
  if (!schema) {
    throw Error(ErrorCode::schema_error,
                std::string(file_name) + ": header does not match any " +
                    std::string(to_string(vendor)) + " export schema");
  }

  ParseResult result;
  result.schema_id = schema->id;
  const BoundSchema bound = bind(*schema, header);
  const std::string file(file_name);

  if (!vendor_exports(vendor, ItemKind::oxygen_saturation)) {
    for (const auto& col : header) {
      const std::string folded = lower(col);
      const auto& names = config.xiaomi.spo2_like_columns;
      if (std::find(names.begin(), names.end(), folded) != names.end()) {
        result.diagnostics.push_back(
            {file, 1, "unsupported-item",
             "column '" + col + "' ignored: oxygen saturation is not extracted from " +
                 std::string(to_string(vendor)) + " exports"});
      }
    }
  }

  std::set<RecordKey> seen;
  std::string_view line;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    ++result.data_rows;
    const SourceLine where{file, reader.line_number()};
    const auto fields = split_csv_line(line);
    try {
      if (fields.size() < header.size()) {
        throw RowError{"column-count", "expected " + std::to_string(header.size()) +
                                           " fields, found " +
                                           std::to_string(fields.size())};
      }
      RawRecord rec = parse_row(RowContext{bound, config, dataset_tz, fields, where});
      if (!seen.insert(key_of(rec)).second) {
        throw RowError{"duplicate-row", "identical to an earlier row; collapsed"};
      }
      result.records.push_back(std::move(rec));
    } catch (const RowError& e) {
      result.diagnostics.push_back({file, where.line, e.code, e.message});
    }
  }
  return result;
}

RawRecord normalize_unit(const RawRecord& record) {
  RawRecord out = record;
  auto invalid = [&](const std::string& what) {
    return Error(ErrorCode::invalid_value,
                 std::string(to_string(record.item)) + " " + what);
  };
  if (out.real_value) {
    out.value = round_half_away(*out.real_value);
    out.real_value.reset();
  }
  if (out.exercise_steps && *out.exercise_steps < 0) {
    throw invalid("has negative step count " + std::to_string(*out.exercise_steps));
  }
  switch (out.item) {
    case ItemKind::steps:
      if (!out.value) throw invalid("has no step count");
      if (*out.value < 0) throw invalid("has negative step count " + std::to_string(*out.value));
      break;
    case ItemKind::heart_rate:
      if (!out.value || *out.value <= 0) throw invalid("must be a positive bpm");
      out.end.reset();
      break;
    case ItemKind::oxygen_saturation:
      if (!out.value || *out.value < 0 || *out.value > 100) {
        throw invalid("must lie in 0..100 percent");
      }
      out.end.reset();
      break;
    case ItemKind::sleep_stage:
      if (!out.stage) throw invalid("has no stage");
      [[fallthrough]];
    case ItemKind::activity_duration:
    case ItemKind::exercise_duration:
    case ItemKind::sleep_duration:
      if (out.day_level) {
        if (!out.value || *out.value < 0) throw invalid("has a negative duration");
        break;
      }
      if (!out.end || *out.end <= out.start) throw invalid("has no positive span");
      out.value = round_half_away(out.span_seconds(), kSecondsPerMinute);
      break;
  }
  return out;
}

std::string render_export(const FileSchema& schema,
                          const std::vector<RawRecord>& records,
                          const TimeZone& dataset_tz,
                          const AdapterConfig& config) {
  std::string out;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    if (i) out += ',';
    out += schema.columns[i].name;
  }
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
      if (i) out += ',';
      switch (schema.columns[i].role) {
        case ColumnRole::start:
          out += format_timestamp(schema.timestamp_format, r.start, dataset_tz);
          break;
        case ColumnRole::end:
          out += format_timestamp(schema.timestamp_format,
                                  r.end.value_or(r.start), dataset_tz);
          break;
        case ColumnRole::date: out += r.start.date().to_string(); break;
        case ColumnRole::time: out += time_of_day(r.start); break;
        case ColumnRole::end_time: out += time_of_day(r.end.value_or(r.start)); break;
        case ColumnRole::value:
          if (schema.fractional_value && (r.real_value || r.value)) {
            const double v = r.real_value ? *r.real_value : static_cast<double>(*r.value);
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v / schema.value_scale);
            out.append(buf, ptr);
          } else if (r.value) {
            out += std::to_string(*r.value);
          }
          break;
        case ColumnRole::steps:
          if (r.exercise_steps) out += std::to_string(*r.exercise_steps);
          break;
        case ColumnRole::duration:
          if (r.day_level) {
            out += std::to_string(
                render_duration(r.value.value_or(0) * 60, schema.duration_unit));
          } else {
            out += std::to_string(render_duration(r.span_seconds(), schema.duration_unit));
          }
          break;
        case ColumnRole::stage:
          if (!r.stage) break;
          if (schema.vendor == VendorKind::samsung) {
            for (const auto& [code, stage] : config.samsung_sleep_stage_codes) {
              if (stage == *r.stage) {
                out += std::to_string(code);
                break;
              }
            }
          } else {
            out += to_string(*r.stage);
          }
          break;
        case ColumnRole::label: out += schema.item == ItemKind::exercise_duration ? "Exercise" : "-"; break;
      }
    }
    out += '\n';
  }
  return out;
}

IngestResult ingest_file(std::string_view file_name, std::string_view content,
                         const AdapterConfig& config, const TimeZone& dataset_tz) {
  IngestResult result;
  result.file_name = std::string(file_name);
  try {
    std::string_view header;
    LineReader reader(content);
    reader.next(header);
    if (!is_valid_utf8(content)) {
      throw Error(ErrorCode::encoding_error,
                  std::string(file_name) + " is not valid UTF-8");
    }
    const FileSchema& schema = detect_schema(file_name, header, config);
    result.vendor = schema.vendor;
    result.schema_id = schema.id;
    ParseResult parsed =
        parse_export(schema.vendor, content, config, dataset_tz, file_name);
    result.diagnostics = std::move(parsed.diagnostics);
    result.records.reserve(parsed.records.size());
    for (const auto& rec : parsed.records) {
      try {
        result.records.push_back(normalize_unit(rec));
      } catch (const Error& e) {
        result.diagnostics.push_back({result.file_name, rec.source.line,
                                      std::string(error_code_name(e.code())),
                                      e.what()});
      }
    }
    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       return a.line < b.line;
                     });
  } catch (const Error& e) {
    result.records.clear();
    result.diagnostics.push_back({result.file_name, 1,
                                  std::string(error_code_name(e.code())), e.what()});
  }
  return result;
}

}  // namespace vital
