#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pdcov/pd_admm.hpp"
#include "pdcov/sample_stats.hpp"

namespace pdcov {

struct CvPlan {
  int folds = 5;
  std::vector<double> lambda_grid;  // strictly ascending, positive
  int repeats = 1;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

struct PathPoint {
  SymMat estimate;
  bool converged = true;
  int iters = 0;
};

// Estimates a correlation matrix at every lambda of an ascending grid.
// Returned points are in grid order.
using PathEstimator =
    std::function<std::vector<PathPoint>(const SymMat& s, const PenaltySpec& family, std::span<const double> grid)>;

// ADM path: soft solves run from the largest lambda down, each warm-started
// at the previous solution; nonconvex families start from the soft solution
// at the same lambda.
PathEstimator adm_path_estimator(const AdmConfig& cfg);

// Building blocks of adm_path_estimator, exposed so callers can share one soft
// path between several nonconvex families.
std::vector<PathPoint> soft_adm_path(const SymMat& s, std::span<const double> grid, const AdmConfig& cfg);
std::vector<PathPoint> nonconvex_adm_path(const SymMat& s, const PenaltySpec& family, std::span<const double> grid,
                                          const AdmConfig& cfg, const std::vector<PathPoint>& soft_path);

// Plain elementwise thresholding at every grid point.
PathEstimator threshold_path_estimator();

struct FoldDiagnostic {
  int repeat = 0;
  int fold = 0;
  double lambda = 0.0;
  double loss = 0.0;
  bool converged = true;
  int iters = 0;
};

struct CvResult {
  double best_lambda = 0.0;
  Eigen::MatrixXd losses;  // grid points x repeats, mean loss over folds
  std::vector<FoldDiagnostic> folds;
};

// K-fold cross-validation of lambda. Each repeat permutes the observations
// (seeded) and cuts them into contiguous folds; the estimate from the
// out-of-fold sample correlation is scored by ||Theta_hat - S_v||_F^2 against
// the held-out fold's sample correlation. Ties go to the larger lambda.
CvResult cross_validate(const SampleSet& samples, const PenaltySpec& family, const CvPlan& plan,
                        const PathEstimator& estimator);

// Log-spaced grid from min_ratio * lambda_max to lambda_max, where lambda_max is
// the largest off-diagonal |S_ij|. Degenerates to {1e-6} when lambda_max = 0.
std::vector<double> default_lambda_grid(const SymMat& s, int points, double min_ratio = 1e-3);

// lambda, repeat, mean_loss
void write_cv_surface_csv(std::ostream& out, const CvPlan& plan, const CvResult& result);

}  // namespace pdcov
