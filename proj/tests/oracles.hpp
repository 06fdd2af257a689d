#pragma once

// Independent reference computations for the tests. Nothing here calls the
// solver code it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "pdcov/penalty.hpp"

namespace oracle {

struct ScalarMin {
  double z = 0.0;
  double value = 0.0;
};

// argmin_z w/2 (z - x)^2 + g(z) on a grid of step 1e-4 over [-|x|-1, |x|+1],
// then once more with step 1e-7 around the coarse winner.
inline ScalarMin prox_grid(const pdcov::PenaltySpec& spec, double x, double w = 1.0) {
  auto f = [&](double z) { return 0.5 * w * (z - x) * (z - x) + pdcov::penalty_value(spec, z); };
  auto scan = [&](double lo, double hi, double step) {
    ScalarMin best{lo, f(lo)};
    const long count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
    for (long k = 1; k <= count; ++k) {
      const double z = lo + step * static_cast<double>(k);
      const double v = f(z);
      if (v < best.value) best = {z, v};
    }
    return best;
  };
  const double reach = std::abs(x) + 1.0;
  ScalarMin coarse = scan(-reach, reach, 1e-4);
  // The origin is where the nonconvex penalties put their kink; make sure the
  // grid contains it exactly.
  if (f(0.0) < coarse.value) coarse = {0.0, f(0.0)};
  ScalarMin fine = scan(coarse.z - 1e-4, coarse.z + 1e-4, 1e-7);
  if (coarse.value < fine.value) fine = coarse;
  if (f(0.0) <= fine.value) fine = {0.0, f(0.0)};
  return fine;
}

// Root of h(eta) = alpha q eta^(q-1) + eta - x on (beta, x) by bisection.
inline double lq_bisection(double alpha, double q, double x, double beta, double tol = 1e-12) {
  auto h = [&](double eta) { return alpha * q * std::pow(eta, q - 1.0) + eta - x; };
  double lo = beta, hi = x;
  for (int it = 0; it < 2000 && hi - lo > tol * 1e-3; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(h(mid)) < tol) return mid;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// (1/n) sum_t (x_t - m)(x_t - m)^T with explicit loops.
inline Eigen::MatrixXd sample_cov_loops(const Eigen::MatrixXd& rows, bool center) {
  const long n = rows.rows(), d = rows.cols();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  if (center) {
    for (long j = 0; j < d; ++j) {
      for (long t = 0; t < n; ++t) mean[static_cast<std::size_t>(j)] += rows(t, j);
      mean[static_cast<std::size_t>(j)] /= static_cast<double>(n);
    }
  }
  Eigen::MatrixXd out(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      double acc = 0.0;
      for (long t = 0; t < n; ++t) {
        acc += (rows(t, i) - mean[static_cast<std::size_t>(i)]) * (rows(t, j) - mean[static_cast<std::size_t>(j)]);
      }
      out(i, j) = acc / static_cast<double>(n);
    }
  }
  return out;
}

// Eigenvalue clipping through Eigen's solver, used where the library's own
// spectral_floor is under test.
inline Eigen::MatrixXd clip_eigen(const Eigen::MatrixXd& m, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(eps).asDiagonal() * es.eigenvectors().transpose();
}

// Smallest eigenvalue of [[1, x, y], [x, 1, x], [y, x, 1]] in closed form:
// (1, 0, -1) gives 1 - y, the symmetric block gives (2 + y -+ sqrt(y^2 + 8 x^2)) / 2.
inline double min_eig_sym3(double x, double y) {
  return std::min(1.0 - y, 0.5 * (2.0 + y - std::sqrt(y * y + 8.0 * x * x)));
}

// Exhaustive search for the constrained soft-penalty problem on 3x3
// correlation matrices with S_12 = S_23 = a and S_13 = b. The problem is
// invariant under reversing the index order and strictly convex, so the
// minimizer shares the pattern Theta_12 = Theta_23 = x, Theta_13 = y.
//   objective = 2 (x - a)^2 + (y - b)^2 + lambda (4 |x| + 2 |y|),  phi_min >= eps
inline std::pair<double, double> corr3_grid(double a, double b, double lambda, double eps, double step = 1e-3) {
  double best = std::numeric_limits<double>::infinity();
  std::pair<double, double> arg{0.0, 0.0};
  const int count = static_cast<int>(std::lround(2.0 / step));
  for (int i = 0; i <= count; ++i) {
    const double x = -1.0 + step * i;
    for (int j = 0; j <= count; ++j) {
      const double y = -1.0 + step * j;
      if (min_eig_sym3(x, y) < eps) continue;
      const double v = 2.0 * (x - a) * (x - a) + (y - b) * (y - b) + lambda * (4.0 * std::abs(x) + 2.0 * std::abs(y));
      if (v < best) {
        best = v;
        arg = {x, y};
      }
    }
  }
  return arg;
}

// corr3_grid followed by local searches at steps 1e-4, 1e-5 and 1e-6 around
// the incumbent. Sharper where the optimum lies on the curved feasible boundary.
inline std::pair<double, double> corr3_refined(double a, double b, double lambda, double eps) {
  auto [bx, by] = corr3_grid(a, b, lambda, eps, 1e-3);
  auto f = [&](double x, double y) {
    return 2.0 * (x - a) * (x - a) + (y - b) * (y - b) + lambda * (4.0 * std::abs(x) + 2.0 * std::abs(y));
  };
  double best = f(bx, by);
  for (double h : {1e-4, 1e-5, 1e-6}) {
    const double cx = bx, cy = by;
    for (int i = -200; i <= 200; ++i) {
      for (int j = -200; j <= 200; ++j) {
        const double x = cx + h * i, y = cy + h * j;
        if (min_eig_sym3(x, y) < eps) continue;
        const double v = f(x, y);
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
  }
  return {bx, by};
}

// min 1/2 ||Sigma - Y||^2 + lambda sum_{i != j} |Sigma_ij|  s.t.  Sigma >= eps I,
// by projected gradient ascent on the dual variable U of the l1 term
// (|U_ij| <= lambda, U_ii = 0); the primal point is clip_eigen(Y - U, eps).
inline Eigen::MatrixXd soft_floor_dual_pg(const Eigen::MatrixXd& y, double lambda, double eps, int max_iter = 500000) {
  const long d = y.rows();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sigma = clip_eigen(y, eps);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd next_u = u + sigma;
    for (long i = 0; i < d; ++i) {
      for (long j = 0; j < d; ++j) next_u(i, j) = i == j ? 0.0 : std::clamp(next_u(i, j), -lambda, lambda);
    }
    Eigen::MatrixXd next_sigma = clip_eigen(y - next_u, eps);
    const double change = (next_sigma - sigma).norm() + (next_u - u).norm();
    u = std::move(next_u);
    sigma = std::move(next_sigma);
    if (change < 1e-15) break;
  }
  return sigma;
}

// Solves B Sigma B + 2 rho Sigma = rhs for symmetric B through the dense
// Kronecker system (B (x) B + 2 rho I) vec(Sigma) = vec(rhs).
inline Eigen::MatrixXd kron_normal_solve(const Eigen::MatrixXd& b, const Eigen::MatrixXd& rhs, double rho) {
  const long d = b.rows();
  Eigen::MatrixXd k(d * d, d * d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) k.block(i * d, j * d, d, d) = b(i, j) * b;
  }
  k += 2.0 * rho * Eigen::MatrixXd::Identity(d * d, d * d);
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(rhs.data(), d * d);
  const Eigen::VectorXd s = k.fullPivLu().solve(v);
  return Eigen::Map<const Eigen::MatrixXd>(s.data(), d, d);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = normal(rng);
  }
  return m;
}

// Random correlation matrix: normalized Gram matrix of k random vectors.
inline Eigen::MatrixXd random_correlation(std::mt19937_64& rng, int d, int k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(k, d);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  }
  Eigen::MatrixXd c = g.transpose() * g;
  const Eigen::VectorXd s = c.diagonal().cwiseSqrt().cwiseInverse();
  c = s.asDiagonal() * c * s.asDiagonal();
  c.diagonal().setOnes();
  return c;
}

}  // namespace oracle
