#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkdv/experiments.hpp"
#include "fkdv/solver.hpp"

namespace fkdv {

/// Bumped on any change to the manifest or CSV layouts.
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "fkdv 0.1.0";

/// Everything a run needs beyond the output directory.
struct RunConfig {
  SimConfig sim;
  std::string experiment;
  ExperimentParams params;
  std::uint64_t seed = 0;
};

/// Sectioned key=value text:
///
///   [sim]         alpha n length dt t_final ic            (required)
///                 dealias diag_every zero_mean tail_tol weight_orders
///                 extended nonlinear hilbert_wnorm
///   [experiment]  name t1 t2 r_probe l_list lambda
///   [run]         seed
///
/// '#' starts a comment. Lists are comma separated. The informational
/// sections a manifest adds ([manifest], [grid], [status]) are accepted.
/// Unknown sections or keys, duplicates, and malformed values are ConfigError
/// naming the key.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config_file(const std::string& path);

/// Default-initialised config that still needs the required [sim] keys.
RunConfig empty_run_config();

/// One override in "section.key=value" or "key=value" form; bare keys are
/// looked up in [sim], then [experiment], then [run].
void apply_setting(RunConfig& rc, const std::string& assignment);

/// Throws ConfigError when a required key was never set.
void finalize(RunConfig& rc);

struct ManifestInfo {
  std::string command;
  std::string start_time;
  std::string end_time;
  bool truncated = false;
};

/// Round-trips through parse_config to the same RunConfig.
std::string render_manifest(const RunConfig& rc, const ManifestInfo& info);

}  // namespace fkdv
