#include "pdcov/sketch_admm.hpp"

#include <cmath>
#include <limits>

#include "adm_loop.hpp"
#include "pdcov/random.hpp"

namespace pdcov {

void SketchModel::validate() const {
  if (a_mat.rows() < 1 || a_mat.cols() < 1) throw Error(ErrorKind::BadDim, "sampling matrix is empty");
  if (!a_mat.allFinite()) throw Error(ErrorKind::NonFinite, "sampling matrix has NaN or Inf entries");
  if (y.dim() != m()) {
    throw Error(ErrorKind::DimMismatch, "Y is " + std::to_string(y.dim()) + "x" + std::to_string(y.dim()) +
                                            " but A has " + std::to_string(m()) + " rows");
  }
}

SketchModel build_sketch(const SampleSet& samples, const Eigen::MatrixXd& a_mat) {
  if (a_mat.cols() != samples.d()) {
    throw Error(ErrorKind::DimMismatch, "sampling matrix has " + std::to_string(a_mat.cols()) +
                                            " columns, samples have dimension " + std::to_string(samples.d()));
  }
  const SymMat r = sample_cov(samples, false);
  SketchModel model{a_mat, SymMat(a_mat * r.mat() * a_mat.transpose())};
  model.validate();
  return model;
}

Eigen::MatrixXd gaussian_sketch_matrix(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw Error(ErrorKind::BadDim, "sketch dimensions must be positive");
  Rng rng(seed);
  return gaussian_matrix(rng, m, d, 1.0 / m);
}

SymMat gamma1_step(const SymMat& sigma, const SymMat& g1_prev, const PenaltySpec& spec, double rho, double c) {
  if (sigma.dim() != g1_prev.dim()) throw Error(ErrorKind::DimMismatch, "gamma1_step");
  if (!(rho > 0.0) || !(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma1_step needs rho, c > 0");
  const double weight = rho + c;
  const int d = sigma.dim();
  Eigen::MatrixXd out(d, d);
  for (int j = 0; j < d; ++j) {
    out(j, j) = sigma(j, j);
    for (int i = 0; i < j; ++i) {
      const double t = weighted_threshold(spec, (rho * sigma(i, j) + c * g1_prev(i, j)) / weight, weight);
      out(i, j) = t;
      out(j, i) = t;
    }
  }
  return SymMat(out);
}

SymMat gamma2_step(const SymMat& sigma, const SymMat& g2_prev, double rho, double dprox, double eps) {
  return v2_step(sigma, g2_prev, rho, dprox, eps);
}

namespace {

SymMat projected_data(const SketchModel& model) {
  return SymMat(model.a_mat.transpose() * model.y.mat() * model.a_mat);
}

SymMat sigma_update(const SymMat& aty_a, const SymMat& g1, const SymMat& g2, double rho, const EigenPair& ata) {
  const int d = aty_a.dim();
  if (g1.dim() != d || g2.dim() != d || ata.values.size() != d) throw Error(ErrorKind::DimMismatch, "sigma_step");
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma_step needs rho > 0");
  const Eigen::MatrixXd& e = ata.vectors;
  const SymMat rhs = aty_a + rho * (g1 + g2);
  const SymMat rotated(e.transpose() * rhs.mat() * e);
  Eigen::MatrixXd denom = ata.values * ata.values.transpose();
  denom.array() += 2.0 * rho;
  const SymMat scaled = hadamard_div(rotated, SymMat(denom));
  return SymMat(e * scaled.mat() * e.transpose());
}

double objective_at(const SketchModel& model, const detail::Blocks& z, const PenaltySpec& spec, double rho,
                    double eps) {
  if (!is_pd_shifted(z.v2, eps - 1e-9)) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd fit = model.y.mat() - model.a_mat * z.theta.mat() * model.a_mat.transpose();
  const Eigen::MatrixXd& sig = z.theta.mat();
  return 0.5 * fit.squaredNorm() + offdiag_penalty(spec, z.v1) +
         0.5 * rho * ((sig - z.v1.mat()).squaredNorm() + (sig - z.v2.mat()).squaredNorm());
}

}  // namespace

SymMat sigma_step(const SketchModel& model, const SymMat& g1, const SymMat& g2, double rho, const EigenPair& ata) {
  model.validate();
  return sigma_update(projected_data(model), g1, g2, rho, ata);
}

double sketch_objective(const SketchModel& model, const AdmState& state, const PenaltySpec& spec, double eps) {
  return objective_at(model, {state.theta, state.v1, state.v2}, spec, state.rho, eps);
}

SymMat sketch_back_projection(const SketchModel& model) {
  model.validate();
  const Eigen::MatrixXd pinv = model.a_mat.completeOrthogonalDecomposition().pseudoInverse();
  return SymMat(pinv * model.y.mat() * pinv.transpose());
}

SymMat sketch_default_init(const SketchModel& model, const PenaltySpec& spec, const SketchAdmConfig& cfg) {
  const SymMat start = sketch_back_projection(model);
  if (spec.family == PenaltyFamily::Soft) return start;
  PenaltySpec convex = spec;
  convex.family = PenaltyFamily::Soft;
  return solve_sketch(model, convex, cfg, start).theta_hat;
}

EstimationReport solve_sketch(const SketchModel& model, const PenaltySpec& spec, const SketchAdmConfig& cfg,
                              const std::optional<SymMat>& init) {
  model.validate();
  spec.validate();
  cfg.validate();
  const int d = model.d();
  if (init && init->dim() != d) throw Error(ErrorKind::DimMismatch, "init has a different dimension than Sigma");

  const SymMat aty_a = projected_data(model);
  const EigenPair ata = eig_sym(SymMat(model.a_mat.transpose() * model.a_mat));
  const SymMat start = init ? *init : sketch_default_init(model, spec, cfg);

  auto cycle = [&](const detail::Blocks& z, double rho) {
    detail::Blocks next;
    next.v1 = gamma1_step(z.theta, z.v1, spec, rho, cfg.c_at(rho));
    next.v2 = gamma2_step(z.theta, z.v2, rho, cfg.d_at(rho), cfg.eps_floor);
    next.theta = sigma_update(aty_a, next.v1, next.v2, rho, ata);
    return next;
  };
  auto objective = [&](const detail::Blocks& z, double rho) {
    return objective_at(model, z, spec, rho, cfg.eps_floor);
  };
  auto loop = detail::run_adm_loop(detail::Blocks{start, start, start}, cfg, cycle, objective);

  SymMat estimate = detail::merge_sparse_feasible(loop.z.v1, loop.z.v2, cfg.eps_floor, false);
  return detail::make_report(std::move(loop), std::move(estimate));
}

}  // namespace pdcov
