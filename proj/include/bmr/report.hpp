#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmr/catalog.hpp"
#include "bmr/hecke.hpp"

namespace bmr {

enum class Task { GroupInfo, IsoCheck, Freeness, GroupAlgebra, B3Reps };

std::string to_string(Task t);
/// Accepts the CLI spellings: group-info, iso-check, freeness, group-algebra, b3rep (or b3-reps).
Task parse_task(const std::string& name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> groups;
  std::vector<Task> tasks;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t prime = kDefaultPrime;
  CoeffMode mode = CoeffMode::ModP;
  std::string out_path;
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;
  std::size_t max_vectors = 4'000'000;
  /// Exact-mode freeness is skipped above this |W|; 0 disables the limit.
  std::uint64_t exact_limit = 100;
  /// Dimensions for the b3rep task.
  std::vector<int> b3_dims{2, 3, 4, 5};
  /// When set, freeness certificates are written here as <group>_<mode>_<seed>.cert.
  std::string certificate_dir;
};

/// Expands "G4..G9,G12" style lists; "all" selects every catalog id.
std::vector<std::string> parse_group_list(const std::string& text, const Catalog& cat);
/// Expands "1..5,9" style lists.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// Throws ConfigError on empty groups/tasks, unknown ids or a composite modulus.
void validate_config(const RunConfig& cfg, const Catalog& cat);

struct Record {
  std::string group;
  std::string task;
  std::uint64_t seed = 0;
  /// "pass", "fail", "skipped" or "error".
  std::string status;
  std::optional<std::uint64_t> rank;
  std::optional<std::uint64_t> order;
  std::optional<std::uint64_t> center_order;
  nlohmann::json details = nlohmann::json::object();
  /// Wall time; kept out of the JSON so reports stay reproducible.
  double seconds = 0;

  bool failed() const { return status == "fail" || status == "error"; }
};

nlohmann::json to_json(const Record& r);

struct Report {
  std::string catalog_checksum;
  RunConfig config;
  std::vector<Record> records;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Runs every (group, task, seed) job on a bounded worker pool; records come back sorted.
Report run(const RunConfig& cfg, const Catalog& cat);

/// Single-job entry points, also used by the bindings.
Record run_group_info(const Catalog& cat, const std::string& group);
Record run_iso_check(const Catalog& cat, const std::string& group);
Record run_freeness(const Catalog& cat, const std::string& group, std::uint64_t seed, const RunConfig& cfg);
Record run_group_algebra(const Catalog& cat, const std::string& group, std::uint64_t seed, const RunConfig& cfg);
Record run_b3(int k, std::uint64_t seed, std::uint64_t prime);

}  // namespace bmr
