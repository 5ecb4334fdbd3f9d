#include "vital/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vital/error.hpp"
#include "vital/service.hpp"

namespace fs = std::filesystem;

namespace vital {

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

std::vector<InputFile> read_inputs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::not_found, "no directory " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<InputFile> files;
  for (const auto& p : paths) {
    files.push_back({fs::relative(p, dir).generic_string(), read_text(p)});
  }
  return files;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_request:
    case ErrorCode::invalid_config:
      return kExitUsage;
    case ErrorCode::integration_failed:
    case ErrorCode::empty_dataset:
      return kExitFailed;
    default:
      return kExitData;
  }
}

std::optional<Date> optional_date(const std::string& name, const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_date_param(name, text);
}

std::pair<std::string, int> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::invalid_config, "addr must be host:port");
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_config, "bad port in '" + addr + "'");
  }
  return {addr.substr(0, colon), port};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wearable data integration and quality toolkit", "vital"};
  app.require_subcommand(1);

  // integrate
  std::string in_dir, out_dir, tz = "UTC", priority;
  int interval = WindowGrid::kDefaultIntervalMinutes;
  bool show_diagnostics = false;
  auto* integrate = app.add_subcommand("integrate", "Integrate vendor exports into a dataset");
  integrate->add_option("--in", in_dir, "Directory of vendor export files")->required();
  integrate->add_option("--out", out_dir, "Dataset directory to write")->required();
  integrate->add_option("--tz", tz, "Dataset timezone, e.g. UTC+9 or Asia/Seoul");
  integrate->add_option("--interval", interval, "Window length in minutes");
  integrate->add_option("--priority", priority, "Vendor order, e.g. samsung,apple,fitbit,xiaomi");
  integrate->add_flag("--diagnostics", show_diagnostics, "Print every row diagnostic");

  // quality
  std::string dataset_dir, report_path;
  FilterSpec qspec;
  auto* quality = app.add_subcommand("quality", "Quality report for a dataset");
  quality->add_option("dataset", dataset_dir, "Dataset directory")->required();
  quality->add_option("--lookback-days", qspec.recency_lookback_days);
  quality->add_option("--hr-low", qspec.hr_low);
  quality->add_option("--hr-high", qspec.hr_high);
  quality->add_option("--step-threshold", qspec.steps_during_sleep_step_threshold);
  quality->add_option("--sleep-window-min", qspec.sleep_window_min_minutes);
  quality->add_option("--min-pairs", qspec.min_correlation_pairs);
  quality->add_option("--report", report_path, "Write the report here instead of stdout");

  // filter
  double min_wear_hours = -1;
  long long min_steps = -1;
  std::string from, to, export_path, save_name;
  auto* filter = app.add_subcommand("filter", "Apply day-level filters and export");
  filter->add_option("dataset", dataset_dir, "Dataset directory")->required();
  filter->add_option("--min-wear-hours", min_wear_hours);
  filter->add_option("--min-steps", min_steps);
  filter->add_option("--from", from, "First date kept (YYYY-MM-DD)");
  filter->add_option("--to", to, "Last date kept (YYYY-MM-DD)");
  filter->add_option("--export", export_path, "Write the filtered canonical CSV here");
  filter->add_option("--save", save_name, "Store the spec in the dataset under this name");

  // frames
  std::string granularity = "window";
  auto* frames = app.add_subcommand("frames", "Print frames or daily summaries");
  frames->add_option("dataset", dataset_dir, "Dataset directory")->required();
  frames->add_option("--granularity", granularity)->check(CLI::IsMember({"window", "daily"}));
  frames->add_option("--from", from);
  frames->add_option("--to", to);

  // export
  std::string filter_name;
  auto* exporter = app.add_subcommand("export", "Write the canonical CSV");
  exporter->add_option("dataset", dataset_dir, "Dataset directory")->required();
  exporter->add_option("--filter", filter_name, "Saved filter to apply");
  exporter->add_option("--out", export_path, "Output file; stdout when absent");

  // serve
  std::string addr = "127.0.0.1:8080", data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--addr", addr, "host:port");
  serve->add_option("--data-dir", data_dir, "Store root; defaults to VITAL_DATA_DIR");

  std::vector<const char*> argv{"vital"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (integrate->parsed()) {
      IntegrateRequest request;
      request.timezone = tz;
      request.interval_minutes = interval;
      if (!priority.empty()) request.policy = parse_priority(priority);
      const auto inputs = read_inputs(in_dir);
      IntegrateOutcome outcome =
          integrate_inputs(inputs, request, AdapterConfig::defaults());
      for (const auto& f : outcome.files) {
        if (!f.vendor) err << "skipped " << f.name << ": vendor not recognized\n";
      }
      if (show_diagnostics || !outcome.stored) {
        for (const auto& d : outcome.diagnostics) err << d.to_string() << "\n";
      } else if (!outcome.diagnostics.empty()) {
        err << outcome.diagnostics.size() << " row diagnostics (use --diagnostics)\n";
      }
      if (!outcome.stored) {
        err << "vital: integration failed: " << outcome.failure << "\n";
        return kExitFailed;
      }
      save_dataset_dir(out_dir, *outcome.stored);
      Json summary = to_json(outcome.stored->manifest);
      summary["records"] = outcome.record_count;
      summary["conflicts"] = outcome.conflict_count;
      summary["diagnostics"] = outcome.diagnostics.size();
      out << summary.dump(2) << "\n";
    } else if (quality->parsed()) {
      qspec.validate();
      const StoredDataset stored = load_dataset_dir(dataset_dir);
      const std::string text = to_json(quality_report(stored.dataset, qspec)).dump(2) + "\n";
      if (report_path.empty()) {
        out << text;
      } else {
        write_text(report_path, text);
      }
    } else if (filter->parsed()) {
      FilterSpec spec;
      if (min_wear_hours >= 0) {
        spec.min_wear_minutes_per_day = static_cast<int>(std::llround(min_wear_hours * 60.0));
      }
      if (min_steps >= 0) spec.min_steps_per_day = min_steps;
      const auto first = optional_date("--from", from);
      const auto last = optional_date("--to", to);
      if (first || last) {
        StoredDataset probe = load_dataset_dir(dataset_dir);
        const auto span = probe.dataset.collection_span();
        const Date lo = first ? *first : (span ? span->first : *last);
        const Date hi = last ? *last : (span ? span->last : *first);
        spec.date_range = DateRange{lo, hi};
      }
      spec.validate();
      StoredDataset stored = load_dataset_dir(dataset_dir);
      const FilterResult result = apply_filter(stored.dataset, spec);
      if (!export_path.empty()) write_text(export_path, export_canonical_csv(stored.dataset, spec));
      if (!save_name.empty()) {
        stored.filters[save_name] = spec;
        save_dataset_dir(dataset_dir, stored);
      }
      out << retention_summary(result).dump(2) << "\n";
    } else if (frames->parsed()) {
      const StoredDataset stored = load_dataset_dir(dataset_dir);
      out << frames_query(stored.dataset, granularity, optional_date("--from", from),
                          optional_date("--to", to))
                 .dump(2)
          << "\n";
    } else if (exporter->parsed()) {
      const StoredDataset stored = load_dataset_dir(dataset_dir);
      std::optional<FilterSpec> spec;
      if (!filter_name.empty()) {
        auto it = stored.filters.find(filter_name);
        if (it == stored.filters.end()) {
          throw Error(ErrorCode::not_found, "no saved filter '" + filter_name + "'");
        }
        spec = it->second;
      }
      const std::string csv = export_canonical_csv(stored.dataset, spec);
      if (export_path.empty()) {
        out << csv;
      } else {
        write_text(export_path, csv);
      }
    } else if (serve->parsed()) {
      ServiceConfig config = ServiceConfig::from_env();
      if (!data_dir.empty()) config.data_dir = data_dir;
      const auto [host, port] = split_addr(addr);
      Service service(std::move(config));
      HttpServer server(service);
      err << "vital: serving on " << host << ":" << port << "\n";
      server.run(host, port);
    }
  } catch (const Error& e) {
    err << "vital: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "vital: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace vital
