#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bilap/corpus.hpp"

namespace bilap {

inline constexpr const char* kToolVersion = "0.1.0";

/// One JSON document drives a run; no environment overrides besides the output directory.
struct ExperimentConfig {
  int resolution = 257;       // analytic corpus / field checks
  int bvp_resolution = 129;   // corpus boundary-value solves
  uint64_t seed = 20240817;
  std::string out_dir = "out";
  std::vector<std::string> checks;  // empty selection runs nothing

  // probe and parameter grids
  std::vector<double> t_values{3, 4, 6, 8};
  double delta = 0.1;
  double threeball_delta = 0.05;
  double threeball_t = 6.0;
  double eps = 0.1;
  double weight_r0 = 0.5;
  double s = 5.0;
  double b_n = 0.1;
  std::vector<int> a_values{8, 12};
  double subdivision_c = 0.05;
  // fixed N0 for the subdivision lemmas, fitted above the corpus junction order (2)
  double n0_gate = 2.5;
  double cover_k = 4.0;
  double cover_tau_hat = 0.05;
  int cover_simplices = 50;
  int cover_samples = 100000;
  double cover_min_width = 0.3;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

/// Validation gathers every offending field into one message.
void validate_config(const ExperimentConfig& cfg);

struct FileEntry {
  std::string name;
  uint64_t bytes = 0;
  std::string digest;  // fnv1a-64 of the content
};

struct CheckOutcome {
  std::string id;
  std::string verdict;  // "pass" | "fail" | "flag"
  std::string summary;
  std::vector<std::string> files;
};

struct RunManifest {
  std::string version;
  std::string config_hash;
  std::string started;   // wall-clock bookkeeping; never part of report digests
  std::string finished;
  int passes = 0, fails = 0, flags = 0;
  std::vector<CheckOutcome> checks;
  std::vector<FileEntry> files;
  int exit_code = 0;  // 0 all pass, 2 at least one failed check, 1 operational error
};

/// Runs the selected checks over the frozen corpus, writes CSV/JSON reports plus
/// manifest.json into out_dir.  Byte-identical reports for identical (config, seed).
RunManifest run_suite(const ExperimentConfig& cfg);

/// Known check ids in execution order.
std::vector<std::string> known_checks();

/// The default configuration with every known check selected.
ExperimentConfig default_full_config();

/// Human-readable mapping check id -> the inequality or procedure it verifies.
/// Unknown ids raise UnknownCheck with the id list.
std::string describe_check(const std::string& id);

uint64_t fnv1a64(const void* data, size_t len);
std::string fnv1a64_hex(const std::string& s);

}  // namespace bilap
