#include "vital/service.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>

#include "vital/csv.hpp"
#include "vital/error.hpp"
#include "vital/timezone.hpp"

namespace vital {

namespace {

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard guard(mutex);
  char buf[24];
  std::snprintf(buf, sizeof buf, "s-%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

bool in_range(Date d, const std::optional<Date>& from, const std::optional<Date>& to) {
  return (!from || d >= *from) && (!to || d <= *to);
}

FilterSpec checked(const FilterSpec& spec) {
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::bad_request, e.what());
  }
  return spec;
}

}  // namespace

IntegrateOutcome integrate_inputs(std::span<const InputFile> files,
                                  const IntegrateRequest& request,
                                  const AdapterConfig& config) {
  const TimeZone tz = TimeZone::parse(request.timezone);
  const WindowGrid grid(request.interval_minutes);
  request.policy.validate();

  IntegrateOutcome out;
  std::vector<RawRecord> records;
  std::vector<SourceFileEntry> entries;
  std::map<std::string, std::string> blobs;
  for (const auto& file : files) {
    IngestResult ingested = ingest_file(file.name, file.content, config, tz);
    FileReport report;
    report.name = file.name;
    report.vendor = ingested.vendor;
    report.schema_id = ingested.schema_id;
    report.size = file.content.size();
    report.sha256 = sha256_hex(file.content);
    report.record_count = ingested.records.size();
    entries.push_back({report.name, report.vendor, report.schema_id, report.size, report.sha256});
    blobs[file.name] = file.content;
    out.files.push_back(std::move(report));
    for (auto& d : ingested.diagnostics) out.diagnostics.push_back(std::move(d));
    for (auto& r : ingested.records) records.push_back(std::move(r));
  }
  out.record_count = records.size();
  if (records.empty()) {
    out.failure = "no file yielded a parseable record";
    return out;
  }

  IntegrationResult result;
  try {
    result = integrate_traced(records, grid, request.policy);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::empty_dataset) throw;
    out.failure = e.what();
    return out;
  }
  out.conflict_count = result.trace.conflicts.size();

  StoredDataset stored;
  stored.dataset = std::move(result.dataset);
  stored.dataset.dataset_id = new_dataset_id();
  stored.dataset.timezone = tz.name();
  stored.manifest = make_manifest(stored.dataset, entries);
  stored.quality = quality_report(stored.dataset, FilterSpec{});
  stored.source_blobs = std::move(blobs);
  out.stored = std::move(stored);
  return out;
}

MergePolicy parse_priority(std::string_view text) {
  MergePolicy policy;
  policy.vendor_priority.clear();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view token = trim(text.substr(pos, comma - pos));
    auto vendor = parse_vendor(token);
    if (!vendor) {
      throw Error(ErrorCode::invalid_config, "unknown vendor '" + std::string(token) + "'");
    }
    policy.vendor_priority.push_back(*vendor);
    pos = comma + 1;
  }
  policy.validate();
  return policy;
}

Date parse_date_param(std::string_view name, std::string_view text) {
  auto d = Date::parse(text);
  if (!d) {
    throw Error(ErrorCode::bad_request,
                std::string(name) + " must be YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return *d;
}

Json frames_query(const Dataset& dataset, std::string_view granularity,
                  std::optional<Date> from, std::optional<Date> to) {
  if (from && to && *to < *from) {
    throw Error(ErrorCode::bad_request, "inverted date range: " + from->to_string() +
                                            " after " + to->to_string());
  }
  Json rows = Json::array();
  if (granularity == "window") {
    for (const auto& frame : dataset.frames) {
      if (in_range(frame.window_start.date(), from, to)) rows.push_back(to_json(frame));
    }
  } else if (granularity == "daily") {
    for (const auto& summary : daily_rollup(dataset)) {
      if (in_range(summary.date, from, to)) rows.push_back(to_json(summary));
    }
  } else {
    throw Error(ErrorCode::bad_request,
                "granularity must be window or daily, got '" + std::string(granularity) + "'");
  }
  Json j;
  j["dataset_id"] = dataset.dataset_id;
  j["granularity"] = granularity;
  j["interval_minutes"] = dataset.grid.interval_minutes();
  j["timezone"] = dataset.timezone;
  j["from"] = from ? Json(from->to_string()) : Json(nullptr);
  j["to"] = to ? Json(to->to_string()) : Json(nullptr);
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const FileReport& r) {
  return {{"name", r.name},
          {"vendor", r.vendor ? Json(to_string(*r.vendor)) : Json(nullptr)},
          {"schema", r.schema_id},
          {"size", r.size},
          {"sha256", r.sha256},
          {"records", r.record_count}};
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::receiving: return "receiving";
    case SessionState::integrated: return "integrated";
    case SessionState::failed: return "failed";
  }
  return "unknown";
}

Json to_json(const UploadSession& s) {
  Json files = Json::array();
  for (const auto& f : s.files) files.push_back(to_json(f));
  Json diagnostics = Json::array();
  for (const auto& d : s.diagnostics) diagnostics.push_back(to_json(d));
  return {{"session_id", s.session_id},
          {"timezone", s.timezone},
          {"state", to_string(s.state)},
          {"files", std::move(files)},
          {"diagnostics", std::move(diagnostics)},
          {"dataset_ids", s.dataset_ids}};
}

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig config;
  if (const char* dir = std::getenv("VITAL_DATA_DIR"); dir && *dir) config.data_dir = dir;
  if (const char* token = std::getenv("VITAL_TOKEN"); token && *token) config.token = token;
  return config;
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)), store_(config_.data_dir) {
  config_.adapters.validate();
}

Service::SessionSlot& Service::slot(const std::string& session_id) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + session_id + "'");
  return it->second;
}

const Service::SessionSlot& Service::slot(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + session_id + "'");
  return it->second;
}

UploadSession Service::create_session(std::string_view timezone) {
  SessionSlot s;
  s.session.timezone = TimeZone::parse(timezone).name();
  s.session.session_id = new_session_id();
  std::lock_guard guard(sessions_mutex_);
  auto [it, inserted] = sessions_.emplace(s.session.session_id, std::move(s));
  return it->second.session;
}

UploadSession Service::session(const std::string& session_id) const {
  std::lock_guard guard(sessions_mutex_);
  return slot(session_id).session;
}

UploadSession Service::handle_upload(const std::string& session_id,
                                     std::vector<InputFile> files) {
  if (files.empty()) throw Error(ErrorCode::bad_request, "upload carries no files");
  std::set<std::string> names;
  for (const auto& f : files) {
    if (f.name.empty()) throw Error(ErrorCode::bad_request, "uploaded file has no name");
    if (!names.insert(f.name).second) {
      throw Error(ErrorCode::bad_request, "file '" + f.name + "' uploaded twice");
    }
  }

  std::string timezone;
  {
    std::lock_guard guard(sessions_mutex_);
    SessionSlot& s = slot(session_id);
    if (s.session.state != SessionState::receiving || s.busy) {
      throw Error(ErrorCode::conflict, "session " + session_id + " is " +
                                           std::string(to_string(s.session.state)) +
                                           " and takes no more files");
    }
    for (const auto& f : s.contents) {
      if (names.count(f.name)) {
        throw Error(ErrorCode::conflict, "session already holds a file named '" + f.name + "'");
      }
    }
    timezone = s.session.timezone;
  }

  const TimeZone tz = TimeZone::parse(timezone);
  std::vector<FileReport> reports;
  std::vector<Diagnostic> diagnostics;
  for (const auto& f : files) {
    IngestResult ingested = ingest_file(f.name, f.content, config_.adapters, tz);
    FileReport report;
    report.name = f.name;
    report.vendor = ingested.vendor;
    report.schema_id = ingested.schema_id;
    report.size = f.content.size();
    report.sha256 = sha256_hex(f.content);
    report.record_count = ingested.records.size();
    reports.push_back(std::move(report));
    for (auto& d : ingested.diagnostics) diagnostics.push_back(std::move(d));
  }

  std::lock_guard guard(sessions_mutex_);
  SessionSlot& s = slot(session_id);
  if (s.session.state != SessionState::receiving || s.busy) {
    throw Error(ErrorCode::conflict, "session " + session_id + " changed during upload");
  }
  for (auto& r : reports) s.session.files.push_back(std::move(r));
  for (auto& d : diagnostics) s.session.diagnostics.push_back(std::move(d));
  for (auto& f : files) s.contents.push_back(std::move(f));
  return s.session;
}

std::string Service::handle_integrate(const std::string& session_id, int interval_minutes,
                                      const MergePolicy& policy,
                                      std::optional<std::string> timezone) {
  IntegrateRequest request;
  request.interval_minutes = interval_minutes;
  request.policy = policy;
  static_cast<void>(WindowGrid{interval_minutes});
  policy.validate();
  if (timezone) TimeZone::parse(*timezone);

  std::vector<InputFile> contents;
  {
    std::lock_guard guard(sessions_mutex_);
    SessionSlot& s = slot(session_id);
    if (s.session.state == SessionState::failed) {
      throw Error(ErrorCode::conflict, "session " + session_id + " has failed");
    }
    if (s.busy) throw Error(ErrorCode::conflict, "session " + session_id + " is integrating");
    s.busy = true;
    contents = s.contents;
    request.timezone = timezone ? *timezone : s.session.timezone;
  }

  IntegrateOutcome outcome;
  try {
    outcome = integrate_inputs(contents, request, config_.adapters);
    if (outcome.stored) store_.save(*outcome.stored);
  } catch (...) {
    std::lock_guard guard(sessions_mutex_);
    slot(session_id).busy = false;
    throw;
  }

  std::lock_guard guard(sessions_mutex_);
  SessionSlot& s = slot(session_id);
  s.busy = false;
  if (!outcome.stored) {
    s.session.state = SessionState::failed;
    s.session.diagnostics.push_back({"", 0, "integration-failed", outcome.failure});
    throw Error(ErrorCode::integration_failed,
                "session " + session_id + ": " + outcome.failure);
  }
  s.session.state = SessionState::integrated;
  s.session.dataset_ids.push_back(outcome.stored->manifest.dataset_id);
  return outcome.stored->manifest.dataset_id;
}

std::shared_ptr<const StoredDataset> Service::load(const std::string& dataset_id) {
  {
    std::lock_guard guard(cache_mutex_);
    if (auto it = datasets_.find(dataset_id); it != datasets_.end()) return it->second;
  }
  auto stored = std::make_shared<const StoredDataset>(store_.load(dataset_id));
  std::lock_guard guard(cache_mutex_);
  return datasets_.emplace(dataset_id, std::move(stored)).first->second;
}

Json Service::list_datasets() const {
  Json out = Json::array();
  for (const auto& m : store_.list()) out.push_back(to_json(m));
  return {{"datasets", std::move(out)}};
}

Json Service::dataset_manifest(const std::string& dataset_id) {
  auto stored = load(dataset_id);
  Json j = to_json(stored->manifest);
  Json names = Json::array();
  for (const auto& [name, spec] : stored->filters) names.push_back(name);
  j["filters"] = std::move(names);
  return j;
}

void Service::delete_dataset(const std::string& dataset_id) {
  std::lock_guard writer(store_.writer_lock(dataset_id));
  store_.remove(dataset_id);
  std::lock_guard guard(cache_mutex_);
  datasets_.erase(dataset_id);
  std::erase_if(quality_cache_, [&](const auto& entry) { return entry.first.first == dataset_id; });
}

Json Service::handle_query_frames(const std::string& dataset_id, std::string_view granularity,
                                  std::optional<Date> from, std::optional<Date> to) {
  auto stored = load(dataset_id);
  return frames_query(stored->dataset, granularity, from, to);
}

Json Service::handle_quality(const std::string& dataset_id, const FilterSpec& spec) {
  checked(spec);
  auto stored = load(dataset_id);
  const auto key = std::make_pair(dataset_id, to_json(spec).dump());
  {
    std::lock_guard guard(cache_mutex_);
    if (auto it = quality_cache_.find(key); it != quality_cache_.end()) {
      return Json::parse(it->second);
    }
  }
  Json report = to_json(quality_report(stored->dataset, spec));
  report["dataset_id"] = dataset_id;
  std::lock_guard guard(cache_mutex_);
  quality_cache_[key] = report.dump();
  return report;
}

Json Service::handle_filter(const std::string& dataset_id, const FilterSpec& spec,
                            const std::string& name) {
  checked(spec);
  if (name.empty()) throw Error(ErrorCode::bad_request, "filter name must not be empty");
  std::lock_guard writer(store_.writer_lock(dataset_id));
  auto stored = load(dataset_id);
  const FilterResult result = apply_filter(stored->dataset, spec);

  auto updated = std::make_shared<StoredDataset>(*stored);
  updated->filters[name] = spec;
  store_.save(*updated);
  {
    std::lock_guard guard(cache_mutex_);
    datasets_[dataset_id] = updated;
  }

  Json summary = retention_summary(result);
  summary["dataset_id"] = dataset_id;
  summary["name"] = name;
  return summary;
}

std::string Service::handle_export(const std::string& dataset_id,
                                   const std::optional<std::string>& filter_name) {
  auto stored = load(dataset_id);
  if (!filter_name) return export_canonical_csv(stored->dataset);
  auto it = stored->filters.find(*filter_name);
  if (it == stored->filters.end()) {
    throw Error(ErrorCode::not_found,
                "dataset " + dataset_id + " has no filter named '" + *filter_name + "'");
  }
  return export_canonical_csv(stored->dataset, it->second);
}

}  // namespace vital
