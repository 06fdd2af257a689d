#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "pdcov/pd_admm.hpp"
#include "pdcov/sim_bench.hpp"

namespace pdcov {

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;

enum class SketchMatrixKind { Gaussian, Identity, File };

// Fully resolved run configuration. Sources, lowest precedence first: built-in
// defaults, the INI config file, command-line flags.
struct CliConfig {
  // [run]
  std::string command;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0 = all cores
  int verbosity = 0;

  // [input] Observations; when samples is empty the data are simulated from [simulate].
  std::string samples;
  bool center = true;

  // [simulate]
  CovModel sim_model{CovKind::Toeplitz, 20};
  int sim_n = 200;

  // [penalty] Unset lambda means cross-validated (estimate) or an error (sketch).
  PenaltySpec penalty{PenaltyFamily::Soft, 0.0, 3.7, 0.5};
  std::optional<double> lambda;

  // [adm]
  AdmConfig adm;
  bool trace = false;
  bool precheck = false;  // skip the solver when plain thresholding is already feasible

  // [cv]
  int cv_folds = 5;
  int cv_repeats = 1;
  int grid_points = 12;
  double grid_min_ratio = 1e-3;
  std::vector<double> lambda_grid;  // explicit grid overrides points/min_ratio
  bool cv_threshold = false;        // score plain thresholding instead of ADM

  // [bench]
  BenchConfig bench;

  // [sketch]
  SketchMatrixKind sketch_kind = SketchMatrixKind::Gaussian;
  int sketch_m = 0;  // 0 = d / 2
  std::string sketch_matrix;

  void validate() const;
};

// Reads an INI file into a property tree (keys "section.name").
boost::property_tree::ptree read_config_file(const std::string& path);

// Resolves a property tree over the defaults. Unknown keys are rejected.
CliConfig config_from_tree(const boost::property_tree::ptree& tree);

// Canonical JSON echo of every resolved setting.
std::string config_to_json(const CliConfig& cfg);

// Command bodies. Each writes its artifacts plus manifest.json into
// cfg.out_dir and returns an exit code.
int cmd_estimate(const CliConfig& cfg, std::ostream& log);
int cmd_bench(const CliConfig& cfg, std::ostream& log);
int cmd_sketch(const CliConfig& cfg, std::ostream& log);
int cmd_cv(const CliConfig& cfg, std::ostream& log);

// Dispatches on cfg.command; library errors map to kExitInput.
int run_command(const CliConfig& cfg, std::ostream& log);

// Full front end: flag parsing, config file, dispatch.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdcov
