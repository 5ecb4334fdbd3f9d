#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vital/adapters.hpp"
#include "vital/error.hpp"
#include "vital/integration.hpp"
#include "vital/quality.hpp"
#include "vital/serialize.hpp"
#include "vital/store.hpp"

namespace httplib {
class Server;
}

namespace vital {

struct InputFile {
  std::string name;
  std::string content;
};

struct IntegrateRequest {
  std::string timezone = "UTC";
  int interval_minutes = WindowGrid::kDefaultIntervalMinutes;
  MergePolicy policy;
};

struct FileReport {
  std::string name;
  std::optional<VendorKind> vendor;
  std::string schema_id;
  std::uint64_t size = 0;
  std::string sha256;
  std::size_t record_count = 0;
};

struct IntegrateOutcome {
  std::vector<FileReport> files;
  std::vector<Diagnostic> diagnostics;
  std::size_t record_count = 0;
  std::size_t conflict_count = 0;
  /// Absent when nothing integrated; `failure` then says why.
  std::optional<StoredDataset> stored;
  std::string failure;
};

/// parse, normalize, integrate, and package one file set for the store.
/// Throws invalid-config for a bad timezone, interval, or policy.
IntegrateOutcome integrate_inputs(std::span<const InputFile> files,
                                  const IntegrateRequest& request,
                                  const AdapterConfig& config);

/// Comma-separated vendor names, e.g. `apple,samsung,fitbit,xiaomi`.
MergePolicy parse_priority(std::string_view text);

/// Throws bad-request.
Date parse_date_param(std::string_view name, std::string_view text);

/// Rows of one dataset between two dates inclusive. Throws bad-request for an
/// unknown granularity or an inverted range.
Json frames_query(const Dataset& dataset, std::string_view granularity,
                  std::optional<Date> from, std::optional<Date> to);

Json to_json(const FileReport& report);

enum class SessionState { receiving, integrated, failed };
std::string_view to_string(SessionState state);

struct UploadSession {
  std::string session_id;
  std::string timezone = "UTC";
  SessionState state = SessionState::receiving;
  std::vector<FileReport> files;
  std::vector<Diagnostic> diagnostics;  // append-only
  std::vector<std::string> dataset_ids;
};

Json to_json(const UploadSession& session);

struct ServiceConfig {
  std::filesystem::path data_dir = "vital-data";
  std::optional<std::string> token;
  AdapterConfig adapters = AdapterConfig::defaults();

  /// VITAL_DATA_DIR and VITAL_TOKEN.
  static ServiceConfig from_env();
};

/// Request handling independent of the HTTP transport.
class Service {
 public:
  explicit Service(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }

  UploadSession create_session(std::string_view timezone = "UTC");
  UploadSession session(const std::string& session_id) const;

  /// Throws bad-request for zero files or a repeated name, conflict once the
  /// session has left `receiving`.
  UploadSession handle_upload(const std::string& session_id,
                              std::vector<InputFile> files);

  /// Returns the new dataset id. An integrated session may be integrated
  /// again under different settings; a failed one may not (conflict).
  /// Throws integration-failed when no record lands on the grid.
  std::string handle_integrate(const std::string& session_id,
                               int interval_minutes = WindowGrid::kDefaultIntervalMinutes,
                               const MergePolicy& policy = {},
                               std::optional<std::string> timezone = std::nullopt);

  Json list_datasets() const;
  Json dataset_manifest(const std::string& dataset_id);
  void delete_dataset(const std::string& dataset_id);

  Json handle_query_frames(const std::string& dataset_id, std::string_view granularity,
                           std::optional<Date> from, std::optional<Date> to);

  /// Cached per (dataset, spec). Throws bad-request for an invalid spec.
  Json handle_quality(const std::string& dataset_id, const FilterSpec& spec);

  /// Saves `spec` under `name` and returns the retention summary.
  Json handle_filter(const std::string& dataset_id, const FilterSpec& spec,
                     const std::string& name = "active");

  /// Canonical CSV, filtered by the named spec when given.
  std::string handle_export(const std::string& dataset_id,
                            const std::optional<std::string>& filter_name);

 private:
  struct SessionSlot {
    UploadSession session;
    std::vector<InputFile> contents;
    bool busy = false;
  };

  std::shared_ptr<const StoredDataset> load(const std::string& dataset_id);
  SessionSlot& slot(const std::string& session_id);
  const SessionSlot& slot(const std::string& session_id) const;

  ServiceConfig config_;
  DatasetStore store_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, SessionSlot> sessions_;

  std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const StoredDataset>> datasets_;
  std::map<std::pair<std::string, std::string>, std::string> quality_cache_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

/// JSON-over-HTTP binding of a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread; port 0 picks a free port.
  /// Returns the bound port. Throws io-error.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  void install_routes();

  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace vital
