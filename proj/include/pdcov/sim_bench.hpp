#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdcov/model_selection.hpp"
#include "pdcov/pd_admm.hpp"
#include "pdcov/sample_stats.hpp"

namespace pdcov {

enum class CovKind { Block, Toeplitz, Banded };

const char* to_string(CovKind kind);
CovKind parse_cov_kind(const std::string& name);

struct CovModel {
  CovKind kind = CovKind::Block;
  int d = 20;

  void validate() const;  // d >= 2; Block needs d % 20 == 0
};

// Block: 0.2 on the diagonal plus 0.8 inside each of d/20 consecutive blocks
// of 20 indices. Toeplitz: 0.75^|i-j|. Banded: (1 - |i-j|/10)_+.
SymMat make_cov(const CovModel& model);

// n rows of L z with L the symmetric square root of cov and z standard normal.
// Throws NotPsd when cov has an eigenvalue below -1e-10 max|cov_ij|.
SampleSet sample_gaussian(const SymMat& cov, int n, std::uint64_t seed);

enum class ErrorMetric { Frobenius, Spectral };

const char* to_string(ErrorMetric metric);

// ||est - truth|| / ||truth|| in the chosen norm.
double relative_error(const SymMat& est, const SymMat& truth, ErrorMetric metric);

enum class EstimatorKind { Adm, Threshold };

struct BenchEstimator {
  std::string name;
  EstimatorKind kind = EstimatorKind::Adm;
  PenaltySpec family;
};

// The ADM estimators soft/hard/scad/lq (q = 0.5, a = 3.7).
std::vector<BenchEstimator> default_adm_estimators();

// "<family>-adm" or "<family>-thr", e.g. "scad-adm". Shape parameters come
// from the arguments.
BenchEstimator parse_bench_estimator(const std::string& name, double scad_a = 3.7, double q = 0.5);

struct BenchConfig {
  std::vector<CovModel> models;
  std::vector<int> n_values;
  int mc_runs = 20;
  std::vector<BenchEstimator> estimators;
  std::uint64_t seed = 1;
  AdmConfig adm;
  int cv_folds = 5;
  int cv_repeats = 1;
  int grid_points = 12;
  double grid_min_ratio = 0.05;
  int threads = 0;

  void validate() const;
};

// One (model, n, run, estimator) outcome.
struct RunRecord {
  CovKind model = CovKind::Block;
  int d = 0;
  int n = 0;
  int run = 0;
  std::string estimator;
  bool ok = false;
  std::string error;
  double lambda = 0.0;
  double rel_frob = 0.0;
  double rel_spec = 0.0;
  double min_eig = 0.0;
  double max_diag_dev = 0.0;  // max |diag(Theta_hat) - 1|
  double sparsity = 0.0;
  bool converged = false;
  int iters = 0;
  Eigen::VectorXd eigenvalues;  // of Theta_hat, descending
};

struct BenchRow {
  CovKind model = CovKind::Block;
  int d = 0;
  int n = 0;
  std::string estimator;
  ErrorMetric metric = ErrorMetric::Frobenius;
  double mean = 0.0;
  double std = 0.0;
  double pd_rate = 0.0;
  double mean_sparsity = 0.0;
  double mean_iters = 0.0;
  int runs = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<RunRecord> runs;
};

// Simulation study: for every (model, n, run) draw Gaussian data, select
// lambda per estimator by cross-validation, fit on the full sample, rescale to
// a covariance and score it against the truth. A failing run is recorded with
// ok = false and does not abort the sweep.
BenchResult run_benchmark(const BenchConfig& cfg);

// Rows aggregated over runs; the row order follows (model, n, estimator, metric).
std::vector<BenchRow> aggregate_runs(const BenchConfig& cfg, const std::vector<RunRecord>& runs);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
// Long format: model, d, n, estimator, run, index, eigenvalue.
void write_eigen_dump_csv(std::ostream& out, const std::vector<RunRecord>& runs);

}  // namespace pdcov
