#pragma once

#include <optional>
#include <vector>

#include "pdcov/linalg.hpp"
#include "pdcov/penalty.hpp"

namespace pdcov {

// Controls for the alternating direction solvers. The coupling penalty rho
// starts at rho_init and grows by rho_growth per iteration until rho_target.
struct AdmConfig {
  double rho_target = 10.0;
  double rho_init = 1.0;
  double rho_growth = 1.09;
  // Proximal weights; unset means prox_scale * rho at each iteration.
  std::optional<double> prox_c;
  std::optional<double> prox_d;
  double prox_scale = 1e-2;
  double eps_floor = 1e-3;
  double tol = 1e-6;
  int max_iter = 2000;

  void validate() const;
  double c_at(double rho) const { return prox_c ? *prox_c : prox_scale * rho; }
  double d_at(double rho) const { return prox_d ? *prox_d : prox_scale * rho; }
};

// Iterate Z = (theta, v1, v2). The sketching solver stores (Sigma, Gamma1,
// Gamma2) in the same slots.
struct AdmState {
  SymMat theta;
  SymMat v1;
  SymMat v2;
  double rho = 1.0;
  int iter = 0;
  std::vector<double> objective_trace;
  std::vector<double> step_norm_trace;
  std::vector<double> rho_trace;
};

struct EstimationReport {
  SymMat theta_hat;
  bool converged = false;
  int iters = 0;
  double final_step_norm = 0.0;
  double min_eig = 0.0;
  double sparsity_offdiag = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> step_norm_trace;
  std::vector<double> rho_trace;
  // First trace index computed at rho_target (trace size when never reached).
  std::size_t tail_start = 0;
  // Final iterate, all three blocks.
  SymMat theta;
  SymMat v1;
  SymMat v2;
};

// V1 update: off-diagonal prox of g_lambda with weight rho + c at
// (rho theta + c v1_prev) / (rho + c); unit diagonal.
SymMat v1_step(const SymMat& theta, const SymMat& v1_prev, const PenaltySpec& spec, double rho, double c);

// V2 update: spectral floor at eps of (rho theta + dprox v2_prev) / (rho + dprox).
SymMat v2_step(const SymMat& theta, const SymMat& v2_prev, double rho, double dprox, double eps);

// Theta update: (S + rho (V1 + V2)) / (2 rho + 1).
SymMat theta_step(const SymMat& s, const SymMat& v1, const SymMat& v2, double rho);

// 1/2 ||theta - S||^2 + g(V1) + indicator(V2 >= eps I) + rho/2 (||theta - V1||^2 + ||theta - V2||^2).
// The indicator is +inf when phi_min(V2) < eps - 1e-9.
double augmented_objective(const SymMat& s, const AdmState& state, const PenaltySpec& spec, double eps);

// One V1 -> V2 -> theta sweep at the state's rho, using cfg's proximal weights.
AdmState adm_cycle(const SymMat& s, const AdmState& state, const PenaltySpec& spec, const AdmConfig& cfg);

// Warm start: the soft-penalty (convex) solution at the same lambda for
// nonconvex families, s itself for the soft family.
SymMat default_init(const SymMat& s, const PenaltySpec& spec, const AdmConfig& cfg);

// Sparse positive-definite correlation estimate. Uses default_init when no
// init is given. Non-convergence is reported through `converged`, not thrown.
EstimationReport solve_correlation(const SymMat& s, const PenaltySpec& spec, const AdmConfig& cfg,
                                   const std::optional<SymMat>& init = std::nullopt);

}  // namespace pdcov
