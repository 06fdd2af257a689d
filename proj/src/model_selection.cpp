#include "pdcov/model_selection.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "pdcov/parallel.hpp"
#include "pdcov/random.hpp"
#include "pdcov/threshold_estimator.hpp"

namespace pdcov {

void CvPlan::validate() const {
  if (folds < 2) throw Error(ErrorKind::InvalidArgument, "cross-validation needs at least 2 folds");
  if (repeats < 1) throw Error(ErrorKind::InvalidArgument, "cross-validation needs at least 1 repeat");
  if (lambda_grid.empty()) throw Error(ErrorKind::InvalidArgument, "lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0) || !std::isfinite(lambda_grid[k])) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid values must be positive and finite");
    }
    if (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid must be strictly ascending");
    }
  }
}

std::vector<PathPoint> soft_adm_path(const SymMat& s, std::span<const double> grid, const AdmConfig& cfg) {
  std::vector<PathPoint> soft(grid.size());
  SymMat warm = s;
  for (std::size_t k = grid.size(); k-- > 0;) {
    const EstimationReport rep = solve_correlation(s, PenaltySpec::soft(grid[k]), cfg, warm);
    soft[k] = {rep.theta_hat, rep.converged, rep.iters};
    warm = rep.theta_hat;
  }
  return soft;
}

std::vector<PathPoint> nonconvex_adm_path(const SymMat& s, const PenaltySpec& family, std::span<const double> grid,
                                          const AdmConfig& cfg, const std::vector<PathPoint>& soft_path) {
  if (soft_path.size() != grid.size()) throw Error(ErrorKind::DimMismatch, "soft path length differs from grid");
  std::vector<PathPoint> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const EstimationReport rep = solve_correlation(s, family.with_lambda(grid[k]), cfg, soft_path[k].estimate);
    out[k] = {rep.theta_hat, rep.converged, rep.iters};
  }
  return out;
}

PathEstimator adm_path_estimator(const AdmConfig& cfg) {
  return [cfg](const SymMat& s, const PenaltySpec& family, std::span<const double> grid) {
    std::vector<PathPoint> soft = soft_adm_path(s, grid, cfg);
    if (family.family == PenaltyFamily::Soft) return soft;
    return nonconvex_adm_path(s, family, grid, cfg, soft);
  };
}

PathEstimator threshold_path_estimator() {
  return [](const SymMat& s, const PenaltySpec& family, std::span<const double> grid) {
    std::vector<PathPoint> out;
    out.reserve(grid.size());
    for (double lambda : grid) out.push_back({generalized_threshold_estimate(s, family.with_lambda(lambda)).estimate, true, 0});
    return out;
  };
}

CvResult cross_validate(const SampleSet& samples, const PenaltySpec& family, const CvPlan& plan,
                        const PathEstimator& estimator) {
  plan.validate();
  const int n = samples.n();
  if (n < 2 * plan.folds) {
    throw Error(ErrorKind::TooFewSamples, std::to_string(plan.folds) + "-fold cross-validation needs at least " +
                                              std::to_string(2 * plan.folds) + " observations, got " +
                                              std::to_string(n));
  }
  const int grid_size = static_cast<int>(plan.lambda_grid.size());
  const int tasks = plan.repeats * plan.folds;

  std::vector<std::vector<int>> perms(static_cast<std::size_t>(plan.repeats));
  for (int r = 0; r < plan.repeats; ++r) {
    Rng rng(derive_seed(plan.seed, {static_cast<std::uint64_t>(r)}));
    perms[static_cast<std::size_t>(r)] = random_permutation(rng, n);
  }

  std::vector<std::vector<FoldDiagnostic>> per_task(static_cast<std::size_t>(tasks));
  parallel_for(tasks, plan.threads, [&](int task) {
    const int r = task / plan.folds;
    const int v = task % plan.folds;
    const std::vector<int>& perm = perms[static_cast<std::size_t>(r)];
    const int begin = static_cast<int>(static_cast<long>(v) * n / plan.folds);
    const int end = static_cast<int>(static_cast<long>(v + 1) * n / plan.folds);
    std::vector<int> held, kept;
    for (int i = 0; i < n; ++i) (i >= begin && i < end ? held : kept).push_back(perm[static_cast<std::size_t>(i)]);

    const SymMat s_val = sample_corr(samples.subset(held));
    const SymMat s_train = sample_corr(samples.subset(kept));
    const std::vector<PathPoint> path = estimator(s_train, family, plan.lambda_grid);
    if (static_cast<int>(path.size()) != grid_size) throw Error(ErrorKind::DimMismatch, "estimator path length");

    auto& diag = per_task[static_cast<std::size_t>(task)];
    for (int k = 0; k < grid_size; ++k) {
      const auto& point = path[static_cast<std::size_t>(k)];
      const double loss = (point.estimate.mat() - s_val.mat()).squaredNorm();
      diag.push_back({r, v, plan.lambda_grid[static_cast<std::size_t>(k)], loss, point.converged, point.iters});
    }
  });

  CvResult result;
  result.losses = Eigen::MatrixXd::Zero(grid_size, plan.repeats);
  for (const auto& diag : per_task) {
    for (int k = 0; k < grid_size; ++k) {
      const FoldDiagnostic& f = diag[static_cast<std::size_t>(k)];
      result.losses(k, f.repeat) += f.loss / plan.folds;
      result.folds.push_back(f);
    }
  }

  const Eigen::VectorXd mean = result.losses.rowwise().mean();
  int best = grid_size - 1;
  for (int k = grid_size - 2; k >= 0; --k) {
    if (mean(k) < mean(best)) best = k;
  }
  result.best_lambda = plan.lambda_grid[static_cast<std::size_t>(best)];
  return result;
}

std::vector<double> default_lambda_grid(const SymMat& s, int points, double min_ratio) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "lambda grid needs at least 2 points");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) throw Error(ErrorKind::InvalidArgument, "min_ratio must be in (0, 1)");
  double lambda_max = 0.0;
  const int d = s.dim();
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) lambda_max = std::max(lambda_max, std::abs(s(i, j)));
  }
  if (lambda_max == 0.0) return {1e-6};
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = std::log(min_ratio * lambda_max), hi = std::log(lambda_max);
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = std::exp(lo + (hi - lo) * k / (points - 1));
  grid.front() = min_ratio * lambda_max;
  grid.back() = lambda_max;
  return grid;
}

void write_cv_surface_csv(std::ostream& out, const CvPlan& plan, const CvResult& result) {
  out << "lambda,repeat,mean_loss\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < result.losses.rows(); ++k) {
    for (Eigen::Index r = 0; r < result.losses.cols(); ++r) {
      out << plan.lambda_grid[static_cast<std::size_t>(k)] << ',' << r << ',' << result.losses(k, r) << '\n';
    }
  }
}

}  // namespace pdcov
