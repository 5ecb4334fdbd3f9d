#include "vital/store.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "vital/error.hpp"

namespace fs = std::filesystem;

namespace vital {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

std::string random_hex(int bytes) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::string out;
  char buf[3];
  for (int i = 0; i < bytes; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", static_cast<unsigned>(rng() & 0xff));
    out += buf;
  }
  return out;
}

// Blob file name inside sources/: position prefix keeps names unique.
std::string blob_name(std::size_t index, const std::string& name) {
  std::string safe;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '-' || c == '_';
    safe += ok ? c : '_';
  }
  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "%03zu-", index);
  return prefix + safe;
}

Json parse_json(const std::string& text, const fs::path& path) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::internal_consistency, "sha256 failed");
  }
  std::string out;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

Json to_json(const Manifest& m) {
  Json j;
  j["dataset_id"] = m.dataset_id;
  j["created_at"] = m.created_at;
  j["timezone"] = m.timezone;
  j["interval_minutes"] = m.interval_minutes;
  j["frame_count"] = m.frame_count;
  if (m.collection_span) {
    j["collection_span"] = {{"first", m.collection_span->first.to_string()},
                            {"last", m.collection_span->last.to_string()}};
  } else {
    j["collection_span"] = nullptr;
  }
  Json sources = Json::array();
  for (const auto& s : m.sources) {
    sources.push_back({{"name", s.name},
                       {"vendor", s.vendor ? Json(to_string(*s.vendor)) : Json(nullptr)},
                       {"schema", s.schema_id},
                       {"size", s.size},
                       {"sha256", s.sha256}});
  }
  j["sources"] = std::move(sources);
  return j;
}

Manifest manifest_from_json(const Json& j) {
  try {
    Manifest m;
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.created_at = j.at("created_at").get<std::string>();
    m.timezone = j.at("timezone").get<std::string>();
    m.interval_minutes = j.at("interval_minutes").get<int>();
    m.frame_count = j.at("frame_count").get<std::size_t>();
    if (const auto& span = j.at("collection_span"); !span.is_null()) {
      auto first = Date::parse(span.at("first").get<std::string>());
      auto last = Date::parse(span.at("last").get<std::string>());
      if (!first || !last) throw Error(ErrorCode::parse_error, "bad collection_span");
      m.collection_span = CollectionSpan{*first, *last};
    }
    for (const auto& s : j.at("sources")) {
      SourceFileEntry e;
      e.name = s.at("name").get<std::string>();
      if (!s.at("vendor").is_null()) e.vendor = parse_vendor(s.at("vendor").get<std::string>());
      e.schema_id = s.at("schema").get<std::string>();
      e.size = s.at("size").get<std::uint64_t>();
      e.sha256 = s.at("sha256").get<std::string>();
      m.sources.push_back(std::move(e));
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed manifest: ") + e.what());
  }
}

Manifest make_manifest(const Dataset& dataset,
                       const std::vector<SourceFileEntry>& sources) {
  Manifest m;
  m.dataset_id = dataset.dataset_id;
  m.created_at = utc_now_text();
  m.timezone = dataset.timezone;
  m.interval_minutes = dataset.grid.interval_minutes();
  m.frame_count = dataset.frames.size();
  m.collection_span = dataset.collection_span();
  m.sources = sources;
  return m;
}

std::string new_dataset_id() { return "ds-" + random_hex(8); }

std::string utc_now_text() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                        now.time_since_epoch()).count();
  return LocalTimestamp::from_seconds(secs).to_string();
}

void save_dataset_dir(const fs::path& dir, const StoredDataset& stored) {
  validate_dataset(stored.dataset);
  const fs::path parent = dir.parent_path().empty() ? fs::path(".") : dir.parent_path();
  fs::create_directories(parent);
  const fs::path tmp = parent / (dir.filename().string() + ".tmp-" + random_hex(4));
  fs::create_directories(tmp / "sources");

  write_file(tmp / "manifest.json", to_json(stored.manifest).dump(2) + "\n");
  write_file(tmp / "dataset.json", to_json(stored.dataset).dump() + "\n");
  write_file(tmp / "frames.csv", export_canonical_csv(stored.dataset));
  Json filters = Json::object();
  for (const auto& [name, spec] : stored.filters) filters[name] = to_json(spec);
  write_file(tmp / "filters.json", filters.dump(2) + "\n");
  if (stored.quality) {
    write_file(tmp / "quality.json", to_json(*stored.quality).dump(2) + "\n");
  }
  for (std::size_t i = 0; i < stored.manifest.sources.size(); ++i) {
    const auto& entry = stored.manifest.sources[i];
    auto it = stored.source_blobs.find(entry.name);
    if (it == stored.source_blobs.end()) continue;
    write_file(tmp / "sources" / blob_name(i, entry.name), it->second);
  }

  if (fs::exists(dir)) {
    const fs::path old = parent / (dir.filename().string() + ".old-" + random_hex(4));
    fs::rename(dir, old);
    fs::rename(tmp, dir);
    fs::remove_all(old);
  } else {
    fs::rename(tmp, dir);
  }
}

StoredDataset load_dataset_dir(const fs::path& dir) {
  if (!fs::is_directory(dir) || !fs::exists(dir / "manifest.json")) {
    throw Error(ErrorCode::not_found, "no dataset at " + dir.string());
  }
  StoredDataset stored;
  stored.manifest = manifest_from_json(
      parse_json(read_file(dir / "manifest.json"), dir / "manifest.json"));
  stored.dataset = dataset_from_json(
      parse_json(read_file(dir / "dataset.json"), dir / "dataset.json"));
  if (stored.dataset.dataset_id != stored.manifest.dataset_id) {
    throw Error(ErrorCode::integrity_error, "manifest and dataset ids differ in " + dir.string());
  }
  if (fs::exists(dir / "quality.json")) {
    stored.quality = quality_report_from_json(
        parse_json(read_file(dir / "quality.json"), dir / "quality.json"));
  }
  if (fs::exists(dir / "filters.json")) {
    const Json filters = parse_json(read_file(dir / "filters.json"), dir / "filters.json");
    for (const auto& [name, spec] : filters.items()) {
      stored.filters[name] = filter_spec_from_json(spec);
    }
  }
  for (std::size_t i = 0; i < stored.manifest.sources.size(); ++i) {
    const auto& entry = stored.manifest.sources[i];
    const fs::path blob = dir / "sources" / blob_name(i, entry.name);
    if (!fs::exists(blob)) continue;
    std::string content = read_file(blob);
    if (sha256_hex(content) != entry.sha256 || content.size() != entry.size) {
      throw Error(ErrorCode::integrity_error,
                  "stored source " + entry.name + " does not match its manifest digest");
    }
    stored.source_blobs[entry.name] = std::move(content);
  }
  return stored;
}

DatasetStore::DatasetStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

fs::path DatasetStore::dir_for(const std::string& dataset_id) const {
  const bool ok = !dataset_id.empty() &&
                  dataset_id.find_first_not_of(
                      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_") ==
                      std::string::npos;
  if (!ok) throw Error(ErrorCode::not_found, "no dataset '" + dataset_id + "'");
  return root_ / dataset_id;
}

void DatasetStore::save(const StoredDataset& stored) {
  save_dataset_dir(dir_for(stored.manifest.dataset_id), stored);
}

StoredDataset DatasetStore::load(const std::string& dataset_id) const {
  const fs::path dir = dir_for(dataset_id);
  if (!fs::exists(dir / "manifest.json")) {
    throw Error(ErrorCode::not_found, "no dataset '" + dataset_id + "'");
  }
  return load_dataset_dir(dir);
}

bool DatasetStore::contains(const std::string& dataset_id) const {
  try {
    return fs::exists(dir_for(dataset_id) / "manifest.json");
  } catch (const Error&) {
    return false;
  }
}

std::vector<Manifest> DatasetStore::list() const {
  std::vector<Manifest> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_directory() || name.find(".tmp-") != std::string::npos ||
        name.find(".old-") != std::string::npos) {
      continue;
    }
    const fs::path manifest = entry.path() / "manifest.json";
    if (!fs::exists(manifest)) continue;
    out.push_back(manifest_from_json(parse_json(read_file(manifest), manifest)));
  }
  std::sort(out.begin(), out.end(), [](const Manifest& a, const Manifest& b) {
    return a.dataset_id < b.dataset_id;
  });
  return out;
}

void DatasetStore::remove(const std::string& dataset_id) {
  const fs::path dir = dir_for(dataset_id);
  if (!fs::exists(dir / "manifest.json")) {
    throw Error(ErrorCode::not_found, "no dataset '" + dataset_id + "'");
  }
  fs::remove_all(dir);
}

std::mutex& DatasetStore::writer_lock(const std::string& dataset_id) {
  std::lock_guard guard(locks_guard_);
  return locks_[dataset_id];
}

}  // namespace vital
