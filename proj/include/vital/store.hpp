#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vital/frame.hpp"
#include "vital/quality.hpp"
#include "vital/serialize.hpp"

namespace vital {

inline constexpr std::string_view kCanonicalCsvHeader =
    "window_start,steps,activity_min,exercise_min,heart_rate_bpm,spo2_pct,"
    "sleep_min,sleep_stage,sources";

/// Canonical CSV: the header above, one row per non-empty frame ascending by
/// window_start, empty fields for absent values, LF line endings. When
/// `spec` is given the day filter is applied first.
std::string export_canonical_csv(const Dataset& dataset,
                                 const std::optional<FilterSpec>& spec = std::nullopt);

/// Inverse of export_canonical_csv. Per-frame sample counts are not part of
/// the CSV, so present biometrics come back with a count of 1.
/// Throws schema-error, parse-error (with line number) or invariant-violation.
Dataset import_canonical_csv(std::string_view content,
                             const WindowGrid& grid = WindowGrid{},
                             std::string timezone = "UTC");

/// Compares frames on the columns the canonical CSV carries.
bool same_exported_frame(const CanonicalFrame& a, const CanonicalFrame& b);

std::string sha256_hex(std::string_view data);

struct SourceFileEntry {
  std::string name;
  std::optional<VendorKind> vendor;
  std::string schema_id;
  std::uint64_t size = 0;
  std::string sha256;

  friend bool operator==(const SourceFileEntry&, const SourceFileEntry&) = default;
};

struct Manifest {
  std::string dataset_id;
  std::string created_at;
  std::string timezone;
  int interval_minutes = WindowGrid::kDefaultIntervalMinutes;
  std::size_t frame_count = 0;
  std::optional<CollectionSpan> collection_span;
  std::vector<SourceFileEntry> sources;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

Json to_json(const Manifest& manifest);
Manifest manifest_from_json(const Json& j);

struct StoredDataset {
  Manifest manifest;
  Dataset dataset;
  std::optional<QualityReport> quality;
  std::map<std::string, FilterSpec> filters;
  /// Raw source file contents keyed by manifest entry name.
  std::map<std::string, std::string> source_blobs;
};

/// Fills manifest fields derived from the dataset and blobs.
Manifest make_manifest(const Dataset& dataset,
                       const std::vector<SourceFileEntry>& sources);

std::string new_dataset_id();
std::string utc_now_text();

/// One dataset per directory: manifest.json, dataset.json, frames.csv,
/// filters.json, optional quality.json, and sources/. Written to a sibling
/// temporary directory and swapped in.
void save_dataset_dir(const std::filesystem::path& dir, const StoredDataset& stored);
/// Throws not-found, integrity-error (digest mismatch), or invariant-violation.
StoredDataset load_dataset_dir(const std::filesystem::path& dir);

/// Directory-backed store keyed by dataset_id under a root directory.
class DatasetStore {
 public:
  explicit DatasetStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  void save(const StoredDataset& stored);
  StoredDataset load(const std::string& dataset_id) const;
  bool contains(const std::string& dataset_id) const;
  /// Manifests ordered by dataset_id.
  std::vector<Manifest> list() const;
  void remove(const std::string& dataset_id);

  /// Serializes writers of one dataset.
  std::mutex& writer_lock(const std::string& dataset_id);

 private:
  std::filesystem::path dir_for(const std::string& dataset_id) const;

  std::filesystem::path root_;
  std::mutex locks_guard_;
  std::map<std::string, std::mutex> locks_;
};

}  // namespace vital
