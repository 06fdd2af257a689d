#pragma once

// Continuation and stopping logic shared by the correlation and sketching
// solvers. Internal to the library.

#include <algorithm>
#include <cmath>

#include "pdcov/pd_admm.hpp"
#include "pdcov/threshold_estimator.hpp"

namespace pdcov::detail {

struct Blocks {
  SymMat theta;
  SymMat v1;
  SymMat v2;
};

inline double squared_norm(const SymMat& m) { return m.mat().squaredNorm(); }

inline double blocks_norm(const Blocks& z) {
  return std::sqrt(squared_norm(z.theta) + squared_norm(z.v1) + squared_norm(z.v2));
}

inline double step_norm(const Blocks& a, const Blocks& b) {
  return std::sqrt((a.theta.mat() - b.theta.mat()).squaredNorm() + (a.v1.mat() - b.v1.mat()).squaredNorm() +
                   (a.v2.mat() - b.v2.mat()).squaredNorm());
}

struct LoopResult {
  Blocks z;
  bool converged = false;
  int iters = 0;
  double final_step_norm = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> step_norm_trace;
  std::vector<double> rho_trace;
  std::size_t tail_start = 0;
};

// cycle(z, rho) -> Blocks performs one sweep; objective(z, rho) -> double
// evaluates the augmented objective at the new iterate with the same rho.
template <class Cycle, class Objective>
LoopResult run_adm_loop(Blocks z, const AdmConfig& cfg, Cycle&& cycle, Objective&& objective) {
  LoopResult out;
  double rho = cfg.rho_init;
  bool tail_found = false;
  out.objective_trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iter, 4096)));
  out.step_norm_trace.reserve(out.objective_trace.capacity());
  out.rho_trace.reserve(out.objective_trace.capacity());

  for (int k = 0; k < cfg.max_iter; ++k) {
    Blocks next = cycle(z, rho);
    const double step = step_norm(next, z);
    const double scale = std::max(1.0, blocks_norm(z));
    const bool at_target = rho >= cfg.rho_target;
    if (at_target && !tail_found) {
      out.tail_start = out.objective_trace.size();
      tail_found = true;
    }
    out.objective_trace.push_back(objective(next, rho));
    out.step_norm_trace.push_back(step);
    out.rho_trace.push_back(rho);
    z = std::move(next);
    out.iters = k + 1;
    out.final_step_norm = step;
    if (at_target && step < cfg.tol * scale) {
      out.converged = true;
      break;
    }
    rho = std::min(rho * cfg.rho_growth, cfg.rho_target);
  }
  if (!tail_found) out.tail_start = out.objective_trace.size();
  out.z = std::move(z);
  return out;
}

// Takes the feasibility block v2, copies exact zeros from the sparsity block
// v1 and, if that pushed phi_min below eps, blends toward the diagonal just
// enough to restore phi_min >= eps. The blend keeps the zero pattern and the
// diagonal.
inline SymMat merge_sparse_feasible(const SymMat& v1, const SymMat& v2, double eps, bool unit_diagonal) {
  const int d = v2.dim();
  Eigen::MatrixXd m = v2.mat();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      if (i != j && std::abs(v1(i, j)) < 1e-12) m(i, j) = 0.0;
    }
  }
  if (unit_diagonal) m.diagonal().setOnes();
  SymMat merged(m);
  if (d == 1) return merged;

  const double mu = min_eigenvalue(merged);
  if (mu >= eps) return merged;
  Eigen::VectorXd anchor = merged.diag().cwiseMax(eps);
  const double delta = anchor.minCoeff();
  // lambda_min(t M + (1 - t) D) >= t mu + (1 - t) delta  (Weyl).
  const double t = delta > eps ? (delta - eps) / (delta - mu) : 0.0;
  Eigen::MatrixXd blended = t * merged.mat();
  blended.diagonal() += (1.0 - t) * anchor;
  if (unit_diagonal) blended.diagonal().setOnes();
  return SymMat(blended);
}

inline EstimationReport make_report(LoopResult&& loop, SymMat estimate) {
  EstimationReport report;
  report.theta_hat = std::move(estimate);
  report.converged = loop.converged;
  report.iters = loop.iters;
  report.final_step_norm = loop.final_step_norm;
  report.min_eig = min_eigenvalue(report.theta_hat);
  report.sparsity_offdiag = offdiag_sparsity(report.theta_hat);
  report.objective_trace = std::move(loop.objective_trace);
  report.step_norm_trace = std::move(loop.step_norm_trace);
  report.rho_trace = std::move(loop.rho_trace);
  report.tail_start = loop.tail_start;
  report.theta = std::move(loop.z.theta);
  report.v1 = std::move(loop.z.v1);
  report.v2 = std::move(loop.z.v2);
  return report;
}

}  // namespace pdcov::detail
