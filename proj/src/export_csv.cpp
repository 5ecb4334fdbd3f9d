#include <algorithm>
#include <charconv>

#include "vital/csv.hpp"
#include "vital/error.hpp"
#include "vital/store.hpp"

namespace vital {

namespace {

template <typename T>
void put_field(std::string& out, const std::optional<T>& v) {
  out += ',';
  if (v) out += std::to_string(*v);
}

std::string sources_field(const CanonicalFrame& f) {
  std::optional<VendorKind> uniform;
  bool mixed = false;
  for (FrameItem item : kAllFrameItems) {
    auto v = f.source(item);
    if (!v) continue;
    if (uniform && *uniform != *v) mixed = true;
    if (!uniform) uniform = v;
  }
  if (!uniform) return "";
  if (!mixed) return std::string(to_string(*uniform));
  std::string out;
  for (FrameItem item : kAllFrameItems) {
    auto v = f.source(item);
    if (!v) continue;
    if (!out.empty()) out += ';';
    out += column_name(item);
    out += '=';
    out += to_string(*v);
  }
  return out;
}

[[noreturn]] void row_error(int line, const std::string& what) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
std::optional<T> parse_field(std::string_view text, int line, std::string_view column) {
  if (text.empty()) return std::nullopt;
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    row_error(line, "column " + std::string(column) + " is not an integer: '" +
                        std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string export_canonical_csv(const Dataset& dataset,
                                 const std::optional<FilterSpec>& spec) {
  std::vector<CanonicalFrame> frames =
      spec ? apply_filter(dataset, *spec).dataset.frames : dataset.frames;
  std::stable_sort(frames.begin(), frames.end(),
                   [](const CanonicalFrame& a, const CanonicalFrame& b) {
                     return a.window_start < b.window_start;
                   });
  std::string out(kCanonicalCsvHeader);
  out += '\n';
  for (const auto& f : frames) {
    if (f.empty()) continue;
    out += f.window_start.to_string();
    put_field(out, f.steps);
    put_field(out, f.activity_minutes);
    put_field(out, f.exercise_minutes);
    put_field(out, f.heart_rate_bpm);
    put_field(out, f.spo2_percent);
    put_field(out, f.sleep_minutes);
    out += ',';
    if (f.sleep_stage) out += to_string(*f.sleep_stage);
    out += ',';
    out += sources_field(f);
    out += '\n';
  }
  return out;
}

Dataset import_canonical_csv(std::string_view content, const WindowGrid& grid,
                             std::string timezone) {
  if (!is_valid_utf8(content)) {
    throw Error(ErrorCode::encoding_error, "canonical CSV is not valid UTF-8");
  }
  LineReader reader(content);
  std::string_view line;
  if (!reader.next(line) || line != kCanonicalCsvHeader) {
    throw Error(ErrorCode::schema_error,
                "header does not match the canonical column list");
  }
  Dataset ds;
  ds.timezone = std::move(timezone);
  ds.grid = grid;
  while (reader.next(line)) {
    const int n = reader.line_number();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) {
      row_error(n, "expected 9 fields, found " + std::to_string(fields.size()));
    }
    CanonicalFrame f;
    auto ts = LocalTimestamp::parse(fields[0]);
    if (!ts) row_error(n, "malformed window_start '" + fields[0] + "'");
    f.window_start = *ts;
    f.steps = parse_field<std::int64_t>(fields[1], n, "steps");
    f.activity_minutes = parse_field<int>(fields[2], n, "activity_min");
    f.exercise_minutes = parse_field<int>(fields[3], n, "exercise_min");
    f.heart_rate_bpm = parse_field<int>(fields[4], n, "heart_rate_bpm");
    f.spo2_percent = parse_field<int>(fields[5], n, "spo2_pct");
    f.sleep_minutes = parse_field<int>(fields[6], n, "sleep_min");
    if (!fields[7].empty()) {
      f.sleep_stage = parse_sleep_stage(fields[7]);
      if (!f.sleep_stage) row_error(n, "unknown sleep_stage '" + fields[7] + "'");
    }
    if (f.heart_rate_bpm) f.heart_rate_samples = 1;
    if (f.spo2_percent) f.spo2_samples = 1;

    const std::string& src = fields[8];
    if (src.find('=') == std::string::npos) {
      auto vendor = parse_vendor(src);
      if (!vendor && !src.empty()) row_error(n, "unknown vendor '" + src + "'");
      for (FrameItem item : kAllFrameItems) {
        if (f.has(item)) f.sources[index_of(item)] = vendor;
      }
    } else {
      std::string_view rest = src;
      while (!rest.empty()) {
        const auto semi = rest.find(';');
        const std::string_view pair = rest.substr(0, semi);
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        const auto eq = pair.find('=');
        auto item = parse_frame_item(pair.substr(0, eq));
        auto vendor = eq == std::string_view::npos ? std::nullopt
                                                   : parse_vendor(pair.substr(eq + 1));
        if (!item || !vendor) row_error(n, "malformed sources entry '" + std::string(pair) + "'");
        f.sources[index_of(*item)] = *vendor;
      }
    }
    try {
      validate_frame(f, grid);
    } catch (const Error& e) {
      throw Error(ErrorCode::invariant_violation,
                  "line " + std::to_string(n) + ": " + e.what());
    }
    if (f.empty()) row_error(n, "row carries no values");
    if (!ds.frames.empty() && !(ds.frames.back().window_start < f.window_start)) {
      throw Error(ErrorCode::invariant_violation,
                  "line " + std::to_string(n) + ": rows must be strictly ascending");
    }
    ds.frames.push_back(std::move(f));
  }
  return ds;
}

bool same_exported_frame(const CanonicalFrame& a, const CanonicalFrame& b) {
  return a.window_start == b.window_start && a.steps == b.steps &&
         a.activity_minutes == b.activity_minutes &&
         a.exercise_minutes == b.exercise_minutes &&
         a.heart_rate_bpm == b.heart_rate_bpm && a.spo2_percent == b.spo2_percent &&
         a.sleep_minutes == b.sleep_minutes && a.sleep_stage == b.sleep_stage &&
         a.sources == b.sources;
}

}  // namespace vital
