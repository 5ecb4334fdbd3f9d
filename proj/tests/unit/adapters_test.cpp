#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "expect_error.hpp"
#include "support.hpp"
#include "vital/adapters.hpp"
#include "vital/timezone.hpp"

namespace vital {
namespace {

namespace fs = std::filesystem;
using testing::ts;

const AdapterConfig& config() {
  static const AdapterConfig c = AdapterConfig::defaults();
  return c;
}

TEST(AdapterConfig, DefaultsCoverEveryExportedItem) {
  EXPECT_NO_THROW(config().validate());
  AdapterConfig broken = config();
  std::erase_if(broken.schemas, [](const FileSchema& s) { return s.id == "fitbit.sleep"; });
  EXPECT_VITAL_ERROR(broken.validate(), ErrorCode::invalid_config);

  AdapterConfig xiaomi_spo2 = config();
  FileSchema s = find_schema(config(), "fitbit.oxygen_saturation");
  s.id = "xiaomi.oxygen_saturation";
  s.vendor = VendorKind::xiaomi;
  xiaomi_spo2.schemas.push_back(s);
  EXPECT_VITAL_ERROR(xiaomi_spo2.validate(), ErrorCode::invalid_config);
}

TEST(DetectVendor, Examples) {
  EXPECT_EQ(detect_vendor("hr.csv", "Time,Heart Rate", config()), VendorKind::fitbit);
  EXPECT_EQ(detect_vendor("x.csv", "heartRate.startDate,heartRate.endDate,heartRate.value",
                          config()),
            VendorKind::apple);
  EXPECT_VITAL_ERROR(detect_vendor("x.csv", "", config()), ErrorCode::unknown_format);
  EXPECT_VITAL_ERROR(detect_vendor("x.csv", "foo,bar", config()), ErrorCode::unknown_format);

  AdapterConfig twin = config();
  FileSchema copy = find_schema(config(), "fitbit.heart_rate");
  copy.id = "samsung.heart_rate_alt";
  copy.vendor = VendorKind::samsung;
  twin.schemas.push_back(copy);
  EXPECT_VITAL_ERROR(detect_vendor("hr.csv", "Time,Heart Rate", twin),
                     ErrorCode::ambiguous_format);
  EXPECT_EQ(detect_vendor("fitbit_hr.csv", "Time,Heart Rate", twin), VendorKind::fitbit);
}

TEST(DetectVendor, ExtraColumnsAndBomAreTolerated) {
  EXPECT_EQ(detect_vendor("f.csv", "\xEF\xBB\xBF" "Time,Heart Rate,Confidence", config()),
            VendorKind::fitbit);
  EXPECT_EQ(detect_schema("f.csv", "date,time,steps", config()).id, "xiaomi.steps");
}

TEST(ParseTimestamp, Examples) {
  const TimeZone seoul = TimeZone::parse("UTC+9");
  EXPECT_EQ(parse_timestamp(VendorKind::samsung, "2024-03-15 08:01:30.123", seoul),
            ts("2024-03-15 08:01:30"));
  EXPECT_EQ(parse_timestamp(VendorKind::apple, "2024-03-15 08:01:30 +0900", seoul),
            ts("2024-03-15 08:01:30"));
  EXPECT_EQ(parse_timestamp(VendorKind::fitbit, "03/15/24 08:01:30", seoul),
            ts("2024-03-15 08:01:30"));
}

TEST(ParseTimestamp, ConvertsOffsetsIntoDatasetZone) {
  const TimeZone seoul = TimeZone::parse("UTC+9");
  EXPECT_EQ(parse_timestamp(VendorKind::apple, "2024-03-15 20:00:00 +0000", seoul),
            ts("2024-03-16 05:00:00"));
  EXPECT_EQ(parse_timestamp(VendorKind::apple, "2024-03-15 08:00:00 -0500", TimeZone::utc()),
            ts("2024-03-15 13:00:00"));
}

TEST(ParseTimestamp, RejectsMalformedText) {
  const TimeZone utc = TimeZone::utc();
  EXPECT_VITAL_ERROR(parse_timestamp(VendorKind::samsung, "2024/03/15 08:01:30", utc),
                     ErrorCode::parse_error);
  EXPECT_VITAL_ERROR(parse_timestamp(VendorKind::apple, "2024-03-15 08:01:30", utc),
                     ErrorCode::parse_error);
  EXPECT_VITAL_ERROR(parse_timestamp(VendorKind::fitbit, "13/15/24 08:01:30", utc),
                     ErrorCode::parse_error);
  EXPECT_VITAL_ERROR(parse_timestamp(VendorKind::samsung, "2024-02-30 00:00:00.000", utc),
                     ErrorCode::parse_error);
}

TEST(ParseExport, ThreeRowFitbitHeartRate) {
  const std::string content =
      "Time,Heart Rate\n03/15/24 08:00:05,71\n03/15/24 08:00:10,72\n03/15/24 08:00:15,74\n";
  const auto r = parse_export(VendorKind::fitbit, content, config(), TimeZone::utc(), "hr.csv");
  EXPECT_EQ(r.schema_id, "fitbit.heart_rate");
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.diagnostics.empty());
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.item, ItemKind::heart_rate);
    EXPECT_EQ(rec.vendor, VendorKind::fitbit);
    EXPECT_FALSE(rec.end);
  }
  EXPECT_EQ(r.records[2].value, 74);
  EXPECT_EQ(r.records[2].source.line, 4);
}

TEST(ParseExport, MalformedRowBecomesDiagnostic) {
  const std::string content =
      "heart_rate.start_time,heart_rate.end_time,heart_rate.heart_rate\n"
      "2024-03-15 08:00:00.000,2024-03-15 08:00:00.000,70\n"
      "2024-03-15 08:01:00.000,2024-03-15 08:01:00.000,71\n"
      "2024-03-15 8h02,2024-03-15 08:02:00.000,72\n"
      "2024-03-15 08:03:00.000,2024-03-15 08:03:00.000,73\n"
      "2024-03-15 08:04:00.000,2024-03-15 08:04:00.000,74\n";
  const auto r =
      parse_export(VendorKind::samsung, content, config(), TimeZone::utc(), "samsung_hr.csv");
  EXPECT_EQ(r.records.size(), 4u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 4);
  EXPECT_EQ(r.diagnostics[0].code, "parse-error");
  EXPECT_EQ(r.diagnostics[0].to_string().rfind("samsung_hr.csv:4: parse-error: ", 0), 0u);
}

TEST(ParseExport, XiaomiSpo2ColumnIsReportedNotParsed) {
  const std::string content =
      "date,time,heartRate,SpO2\n2024-03-15,08:00,70,97\n2024-03-15,08:01,72,96\n";
  const auto r =
      parse_export(VendorKind::xiaomi, content, config(), TimeZone::utc(), "xiaomi_hr.csv");
  ASSERT_EQ(r.records.size(), 2u);
  for (const auto& rec : r.records) EXPECT_EQ(rec.item, ItemKind::heart_rate);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "unsupported-item");
  EXPECT_EQ(r.diagnostics[0].line, 1);
}

TEST(ParseExport, FileLevelFailures) {
  EXPECT_VITAL_ERROR(parse_export(VendorKind::fitbit, "Time,Heart Rate\n\xff\xfe,1\n", config(),
                                  TimeZone::utc(), "bad.csv"),
                     ErrorCode::encoding_error);
  EXPECT_VITAL_ERROR(parse_export(VendorKind::fitbit, "when,bpm\n1,2\n", config(),
                                  TimeZone::utc(), "bad.csv"),
                     ErrorCode::schema_error);
  EXPECT_VITAL_ERROR(parse_export(VendorKind::samsung, "Time,Heart Rate\n", config(),
                                  TimeZone::utc(), "bad.csv"),
                     ErrorCode::schema_error);
}

TEST(ParseExport, DuplicateRowsCollapse) {
  const std::string content =
      "date,time,steps\n2024-03-15,08:00,10\n2024-03-15,08:00,10\n2024-03-15,08:01,12\n";
  const auto r = parse_export(VendorKind::xiaomi, content, config(), TimeZone::utc(), "x.csv");
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "duplicate-row");
  EXPECT_EQ(r.diagnostics[0].line, 3);
}

TEST(ParseExport, DerivesEndFromDuration) {
  const std::string content =
      "Activity Name,Start Time,Duration,Steps\nWalk,03/15/24 17:00:00,1200000,2100\n";
  const auto r = parse_export(VendorKind::fitbit, content, config(), TimeZone::utc(), "f.csv");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].end, ts("2024-03-15 17:20:00"));
  EXPECT_EQ(r.records[0].exercise_steps, 2100);

  const std::string xiaomi = "date,startTime,sleepMinutes\n2024-03-15,23:30,90\n";
  const auto x = parse_export(VendorKind::xiaomi, xiaomi, config(), TimeZone::utc(), "x.csv");
  ASSERT_EQ(x.records.size(), 1u);
  EXPECT_EQ(x.records[0].end, ts("2024-03-16 01:00:00"));

  const std::string wraps = "date,startTime,endTime,steps\n2024-03-15,23:50,00:10,300\n";
  const auto w = parse_export(VendorKind::xiaomi, wraps, config(), TimeZone::utc(), "x.csv");
  ASSERT_EQ(w.records.size(), 1u);
  EXPECT_EQ(w.records[0].end, ts("2024-03-16 00:10:00"));
}

TEST(ParseExport, DurationMustAgreeWithEnd) {
  const std::string content =
      "activity.start_time,activity.end_time,activity.active_time\n"
      "2024-03-15 08:00:00.000,2024-03-15 08:10:00.000,600000\n"
      "2024-03-15 09:00:00.000,2024-03-15 09:10:00.000,500000\n";
  const auto r = parse_export(VendorKind::samsung, content, config(), TimeZone::utc(), "s.csv");
  EXPECT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "duration-mismatch");
}

TEST(ParseExport, XiaomiStagesAreDayLevel) {
  const std::string content = "date,stage,minutes\n2024-03-15,deep,80\n2024-03-15,shallow,200\n";
  const auto r = parse_export(VendorKind::xiaomi, content, config(), TimeZone::utc(), "x.csv");
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_TRUE(r.records[0].day_level);
  EXPECT_EQ(r.records[0].value, 80);
  EXPECT_EQ(r.records[1].stage, SleepStage::light);
}

TEST(ParseExport, LosslessOrReported) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> good = {"2024-03-15,08:00,70", "2024-03-15,08:01,71",
                                         "2024-03-15,08:02,72", "2024-03-15,08:03,73"};
  const std::vector<std::string> bad = {"2024-03-15,08:0x,70", "2024-03-15,,71",
                                        "2024-03-15,08:02,-4", "2024-03-15", "2024-02-30,08:00,70",
                                        "2024-03-15,08:02,seventy"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string content = "date,time,heartRate\n";
    int rows = 0;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const bool pick_bad = rng() % 3 == 0;
      const auto& pool = pick_bad ? bad : good;
      content += pool[rng() % pool.size()] + "\n";
      ++rows;
    }
    const auto r = parse_export(VendorKind::xiaomi, content, config(), TimeZone::utc(), "x.csv");
    std::size_t ingested = r.records.size();
    std::size_t failed = 0;
    for (const auto& rec : r.records) {
      try {
        normalize_unit(rec);
      } catch (const Error&) {
        --ingested;
        ++failed;
      }
    }
    EXPECT_EQ(r.data_rows, rows);
    EXPECT_EQ(r.records.size() + r.diagnostics.size(), static_cast<std::size_t>(rows));
    EXPECT_EQ(ingested + failed, r.records.size());
  }
}

TEST(MapSleepStage, Examples) {
  EXPECT_EQ(map_sleep_stage(VendorKind::fitbit, std::string_view("deep"), config()),
            SleepStage::deep);
  EXPECT_EQ(map_sleep_stage(VendorKind::apple, std::string_view("REM"), config()),
            SleepStage::rem);
  EXPECT_EQ(map_sleep_stage(VendorKind::apple, std::string_view("AsleepCore"), config()),
            SleepStage::light);
  EXPECT_EQ(map_sleep_stage(VendorKind::fitbit, std::string_view("wake"), config()),
            SleepStage::awake);
  EXPECT_EQ(map_sleep_stage(VendorKind::samsung, std::int64_t{40003}, config()),
            SleepStage::deep);
  EXPECT_VITAL_ERROR(map_sleep_stage(VendorKind::samsung, std::int64_t{99999}, config()),
                     ErrorCode::unknown_stage);
  EXPECT_VITAL_ERROR(map_sleep_stage(VendorKind::fitbit, std::string_view("dozing"), config()),
                     ErrorCode::unknown_stage);
  EXPECT_VITAL_ERROR(map_sleep_stage(VendorKind::fitbit, std::string_view(" "), config()),
                     ErrorCode::unknown_stage);
}

TEST(NormalizeUnit, Examples) {
  RawRecord spo2 = testing::point(VendorKind::apple, ItemKind::oxygen_saturation,
                                  ts("2024-03-15 03:00:00"), 0);
  spo2.value.reset();
  spo2.real_value = 97.6;
  EXPECT_EQ(normalize_unit(spo2).value, 98);
  spo2.real_value = 97.5;
  EXPECT_EQ(normalize_unit(spo2).value, 98);
  spo2.real_value = 100.6;
  EXPECT_VITAL_ERROR(normalize_unit(spo2), ErrorCode::invalid_value);

  const RawRecord hr =
      testing::point(VendorKind::fitbit, ItemKind::heart_rate, ts("2024-03-15 03:00:00"), 72);
  EXPECT_EQ(normalize_unit(hr).value, 72);

  const RawRecord steps = testing::span(VendorKind::fitbit, ItemKind::steps,
                                        ts("2024-03-15 03:00:00"), ts("2024-03-15 03:01:00"), -5);
  EXPECT_VITAL_ERROR(normalize_unit(steps), ErrorCode::invalid_value);

  const RawRecord activity =
      testing::span(VendorKind::samsung, ItemKind::activity_duration, ts("2024-03-15 03:00:00"),
                    ts("2024-03-15 03:02:30"), 0);
  EXPECT_EQ(normalize_unit(activity).value, 3);
}

TEST(Fixtures, EveryVendorFileParsesCleanly) {
  const fs::path root = testing::fixture_dir() / "vendors";
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const std::string vendor = entry.path().parent_path().filename().string();
    const std::string item = entry.path().stem().string();
    const std::string name = vendor + "/" + entry.path().filename().string();
    const auto result =
        ingest_file(name, testing::read_file(entry.path()), config(), TimeZone::parse("UTC+9"));
    EXPECT_EQ(result.schema_id, vendor + "." + item) << name;
    EXPECT_FALSE(result.records.empty()) << name;
    for (const auto& d : result.diagnostics) ADD_FAILURE() << d.to_string();
  }
  EXPECT_EQ(files, 25);
}

TEST(IngestFile, UnknownFormatIsASingleDiagnostic) {
  const auto r = ingest_file("notes.txt", "hello,world\n1,2\n", config(), TimeZone::utc());
  EXPECT_FALSE(r.vendor);
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "unknown-format");
  EXPECT_EQ(r.diagnostics[0].line, 1);
}

// Renders normalized records for a schema, reparses, and compares.
RawRecord random_record_for(const FileSchema& schema, std::mt19937_64& rng) {
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  RawRecord r;
  r.vendor = schema.vendor;
  r.item = schema.item;
  r.start = ts("2024-03-10 00:00:00").plus_seconds(uniform(0, 5 * kSecondsPerDay));
  if (schema.day_level) {
    r.start = LocalTimestamp::start_of(r.start.date());
    r.end = LocalTimestamp::start_of(r.start.date().next());
    r.day_level = true;
    r.value = uniform(0, 600);
    r.stage = kAllStages[static_cast<std::size_t>(uniform(0, 3))];
    return r;
  }
  if (!is_span_item(schema.item)) {
    r.value = schema.item == ItemKind::heart_rate ? uniform(35, 210) : uniform(80, 100);
    return r;
  }
  std::int64_t length = uniform(1, 20000);
  if (schema.implied_span_seconds > 0) length = schema.implied_span_seconds;
  if (schema.duration_unit == DurationUnit::minutes && schema.column(ColumnRole::duration)) {
    length = uniform(1, 600) * 60;
  }
  r.end = r.start.plus_seconds(length);
  if (schema.item == ItemKind::steps) r.value = uniform(0, 9000);
  if (schema.item == ItemKind::sleep_stage) {
    r.stage = kAllStages[static_cast<std::size_t>(uniform(0, 3))];
  }
  if (schema.column(ColumnRole::steps) && uniform(0, 1) == 1) r.exercise_steps = uniform(0, 5000);
  return normalize_unit(r);
}

TEST(RenderExport, RoundTripsEverySchema) {
  std::mt19937_64 rng(2024);
  const TimeZone tz = TimeZone::parse("UTC+9");
  for (const FileSchema& schema : config().schemas) {
    std::vector<RawRecord> records;
    for (int i = 0; i < 40; ++i) records.push_back(random_record_for(schema, rng));
    const std::string text = render_export(schema, records, tz, config());
    const std::string name = std::string(to_string(schema.vendor)) + "_export.csv";
    const auto parsed = parse_export(schema.vendor, text, config(), tz, name);
    EXPECT_EQ(parsed.schema_id, schema.id);
    for (const auto& d : parsed.diagnostics) ADD_FAILURE() << schema.id << " " << d.to_string();
    ASSERT_EQ(parsed.records.size(), records.size()) << schema.id;
    for (std::size_t i = 0; i < records.size(); ++i) {
      EXPECT_TRUE(same_measurement(normalize_unit(parsed.records[i]), records[i]))
          << schema.id << " row " << i << "\n"
          << text.substr(0, 400);
    }
  }
}

TEST(RenderExport, FixtureFilesRoundTrip) {
  const TimeZone tz = TimeZone::parse("UTC+9");
  for (const auto& entry : fs::recursive_directory_iterator(testing::fixture_dir() / "vendors")) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().parent_path().filename().string() + "_" +
                             entry.path().filename().string();
    const std::string content = testing::read_file(entry.path());
    const VendorKind vendor = detect_vendor(name, content.substr(0, content.find('\n')), config());
    const auto first = parse_export(vendor, content, config(), tz, name);
    const auto& schema = find_schema(config(), first.schema_id);
    const auto second =
        parse_export(vendor, render_export(schema, first.records, tz, config()), config(), tz, name);
    ASSERT_EQ(first.records.size(), second.records.size()) << name;
    for (std::size_t i = 0; i < first.records.size(); ++i) {
      EXPECT_TRUE(same_measurement(normalize_unit(first.records[i]),
                                   normalize_unit(second.records[i])))
          << name << " row " << i;
    }
  }
}

}  // namespace
}  // namespace vital
