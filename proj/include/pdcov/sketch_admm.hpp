#pragma once

#include <cstdint>
#include <optional>

#include "pdcov/pd_admm.hpp"
#include "pdcov/sample_stats.hpp"

namespace pdcov {

// Compressed observations y_t = A x_t with A m x d. Y is their (uncentered)
// sample covariance A R A^T.
struct SketchModel {
  Eigen::MatrixXd a_mat;
  SymMat y;

  int m() const { return static_cast<int>(a_mat.rows()); }
  int d() const { return static_cast<int>(a_mat.cols()); }
  void validate() const;
};

// Same controls as the correlation solver; eps_floor bounds phi_min(Sigma).
using SketchAdmConfig = AdmConfig;

SketchModel build_sketch(const SampleSet& samples, const Eigen::MatrixXd& a_mat);

// m x d sampling matrix with i.i.d. N(0, 1/m) entries, so E[A^T A] = I.
Eigen::MatrixXd gaussian_sketch_matrix(int m, int d, std::uint64_t seed);

// Gamma1 update: off-diagonal prox of g_lambda with weight rho + c at
// (rho Sigma + c Gamma1_prev) / (rho + c); diagonal copied from Sigma.
SymMat gamma1_step(const SymMat& sigma, const SymMat& g1_prev, const PenaltySpec& spec, double rho, double c);

// Gamma2 update; same contract as v2_step.
SymMat gamma2_step(const SymMat& sigma, const SymMat& g2_prev, double rho, double dprox, double eps);

// Closed-form Sigma update: the solution of
//   A^T A Sigma A^T A + 2 rho Sigma = A^T Y A + rho (Gamma1 + Gamma2)
// through the cached eigendecomposition A^T A = E diag(a) E^T.
SymMat sigma_step(const SketchModel& model, const SymMat& g1, const SymMat& g2, double rho, const EigenPair& ata);

// 1/2 ||Y - A Sigma A^T||^2 + g(Gamma1) + indicator(Gamma2 >= eps I)
//   + rho/2 (||Sigma - Gamma1||^2 + ||Sigma - Gamma2||^2), with state slots
// (theta, v1, v2) = (Sigma, Gamma1, Gamma2).
double sketch_objective(const SketchModel& model, const AdmState& state, const PenaltySpec& spec, double eps);

// Minimum-norm back-projection A^+ Y A^+^T; equals Y when A = I.
SymMat sketch_back_projection(const SketchModel& model);

SymMat sketch_default_init(const SketchModel& model, const PenaltySpec& spec, const SketchAdmConfig& cfg);

// Sparse positive-definite covariance estimate from the sketch. The report's
// theta_hat holds Sigma-hat.
EstimationReport solve_sketch(const SketchModel& model, const PenaltySpec& spec, const SketchAdmConfig& cfg,
                              const std::optional<SymMat>& init = std::nullopt);

}  // namespace pdcov
