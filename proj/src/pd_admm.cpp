#include "pdcov/pd_admm.hpp"

#include <cmath>
#include <limits>

#include "adm_loop.hpp"
#include "pdcov/threshold_estimator.hpp"

namespace pdcov {

void AdmConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(rho_init) || !positive(rho_target) || rho_init > rho_target) {
    throw Error(ErrorKind::InvalidArgument, "need 0 < rho_init <= rho_target");
  }
  if (!(rho_growth >= 1.0) || !std::isfinite(rho_growth)) throw Error(ErrorKind::InvalidArgument, "rho_growth must be >= 1");
  if (rho_growth == 1.0 && rho_init < rho_target) {
    throw Error(ErrorKind::InvalidArgument, "rho_growth = 1 never reaches rho_target");
  }
  if ((prox_c && !positive(*prox_c)) || (prox_d && !positive(*prox_d)) || !positive(prox_scale)) {
    throw Error(ErrorKind::InvalidArgument, "proximal weights must be positive");
  }
  if (!positive(eps_floor)) throw Error(ErrorKind::InvalidArgument, "eps_floor must be positive");
  if (!positive(tol)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
}

SymMat v1_step(const SymMat& theta, const SymMat& v1_prev, const PenaltySpec& spec, double rho, double c) {
  if (theta.dim() != v1_prev.dim()) throw Error(ErrorKind::DimMismatch, "v1_step");
  if (!(rho > 0.0) || !(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "v1_step needs rho, c > 0");
  const double weight = rho + c;
  const int d = theta.dim();
  Eigen::MatrixXd out(d, d);
  for (int j = 0; j < d; ++j) {
    out(j, j) = 1.0;
    for (int i = 0; i < j; ++i) {
      const double avg = (rho * theta(i, j) + c * v1_prev(i, j)) / weight;
      const double t = weighted_threshold(spec, avg, weight);
      out(i, j) = t;
      out(j, i) = t;
    }
  }
  return SymMat(out);
}

SymMat v2_step(const SymMat& theta, const SymMat& v2_prev, double rho, double dprox, double eps) {
  if (theta.dim() != v2_prev.dim()) throw Error(ErrorKind::DimMismatch, "v2_step");
  if (!(rho > 0.0) || !(dprox > 0.0)) throw Error(ErrorKind::InvalidArgument, "v2_step needs rho, d > 0");
  return spectral_floor((1.0 / (rho + dprox)) * (rho * theta + dprox * v2_prev), eps);
}

SymMat theta_step(const SymMat& s, const SymMat& v1, const SymMat& v2, double rho) {
  if (s.dim() != v1.dim() || s.dim() != v2.dim()) throw Error(ErrorKind::DimMismatch, "theta_step");
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta_step needs rho > 0");
  return (1.0 / (2.0 * rho + 1.0)) * (s + rho * (v1 + v2));
}

namespace {

double correlation_objective(const SymMat& s, const detail::Blocks& z, const PenaltySpec& spec, double rho,
                             double eps) {
  if (!is_pd_shifted(z.v2, eps - 1e-9)) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd& th = z.theta.mat();
  return 0.5 * (th - s.mat()).squaredNorm() + offdiag_penalty(spec, z.v1) +
         0.5 * rho * ((th - z.v1.mat()).squaredNorm() + (th - z.v2.mat()).squaredNorm());
}

detail::Blocks correlation_cycle(const SymMat& s, const detail::Blocks& z, const PenaltySpec& spec, double rho,
                                 const AdmConfig& cfg) {
  detail::Blocks next;
  next.v1 = v1_step(z.theta, z.v1, spec, rho, cfg.c_at(rho));
  next.v2 = v2_step(z.theta, z.v2, rho, cfg.d_at(rho), cfg.eps_floor);
  next.theta = theta_step(s, next.v1, next.v2, rho);
  return next;
}

}  // namespace

double augmented_objective(const SymMat& s, const AdmState& state, const PenaltySpec& spec, double eps) {
  return correlation_objective(s, {state.theta, state.v1, state.v2}, spec, state.rho, eps);
}

AdmState adm_cycle(const SymMat& s, const AdmState& state, const PenaltySpec& spec, const AdmConfig& cfg) {
  detail::Blocks next = correlation_cycle(s, {state.theta, state.v1, state.v2}, spec, state.rho, cfg);
  AdmState out;
  out.theta = std::move(next.theta);
  out.v1 = std::move(next.v1);
  out.v2 = std::move(next.v2);
  out.rho = state.rho;
  out.iter = state.iter + 1;
  return out;
}

SymMat default_init(const SymMat& s, const PenaltySpec& spec, const AdmConfig& cfg) {
  if (spec.family == PenaltyFamily::Soft) return s;
  PenaltySpec convex = spec;
  convex.family = PenaltyFamily::Soft;
  return solve_correlation(s, convex, cfg, s).theta_hat;
}

EstimationReport solve_correlation(const SymMat& s, const PenaltySpec& spec, const AdmConfig& cfg,
                                   const std::optional<SymMat>& init) {
  spec.validate();
  cfg.validate();
  require_correlation(s);
  const int d = s.dim();
  if (init && init->dim() != d) throw Error(ErrorKind::DimMismatch, "init has a different dimension than S");

  if (d == 1) {
    EstimationReport report;
    report.theta_hat = SymMat::identity(1);
    report.converged = true;
    report.min_eig = 1.0;
    report.sparsity_offdiag = 1.0;
    report.theta = report.v1 = report.v2 = report.theta_hat;
    return report;
  }
  if (!(cfg.eps_floor < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "a unit-diagonal matrix cannot have every eigenvalue >= eps_floor >= 1");
  }

  const SymMat start = init ? *init : default_init(s, spec, cfg);
  detail::Blocks z{start, start, start};
  auto loop = detail::run_adm_loop(
      std::move(z), cfg,
      [&](const detail::Blocks& cur, double rho) { return correlation_cycle(s, cur, spec, rho, cfg); },
      [&](const detail::Blocks& next, double rho) { return correlation_objective(s, next, spec, rho, cfg.eps_floor); });

  SymMat estimate = detail::merge_sparse_feasible(loop.z.v1, loop.z.v2, cfg.eps_floor, true);
  return detail::make_report(std::move(loop), std::move(estimate));
}

}  // namespace pdcov
