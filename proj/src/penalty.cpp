#include "pdcov/penalty.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pdcov {

const char* to_string(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::Hard: return "hard";
    case PenaltyFamily::Soft: return "soft";
    case PenaltyFamily::Scad: return "scad";
    case PenaltyFamily::Lq: return "lq";
  }
  return "unknown";
}

PenaltyFamily parse_penalty_family(const std::string& name) {
  if (name == "hard") return PenaltyFamily::Hard;
  if (name == "soft") return PenaltyFamily::Soft;
  if (name == "scad") return PenaltyFamily::Scad;
  if (name == "lq") return PenaltyFamily::Lq;
  throw Error(ErrorKind::Parse, "unknown penalty family '" + name + "' (expected hard|soft|scad|lq)");
}

void PenaltySpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "lambda must be finite and >= 0");
  }
  if (family == PenaltyFamily::Scad && !(scad_a > 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "SCAD requires a > 2");
  }
  if (family == PenaltyFamily::Lq && !(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "lq penalty requires 0 < q < 1");
  }
}

PenaltySpec PenaltySpec::with_lambda(double new_lambda) const {
  PenaltySpec out = *this;
  out.lambda = new_lambda;
  return out;
}

PenaltySpec PenaltySpec::hard(double lambda) { return {PenaltyFamily::Hard, lambda, 3.7, 0.5}; }
PenaltySpec PenaltySpec::soft(double lambda) { return {PenaltyFamily::Soft, lambda, 3.7, 0.5}; }
PenaltySpec PenaltySpec::scad(double lambda, double a) { return {PenaltyFamily::Scad, lambda, a, 0.5}; }
PenaltySpec PenaltySpec::lq(double lambda, double q) { return {PenaltyFamily::Lq, lambda, 3.7, q}; }

double lq_beta(double lambda, double q) { return 2.0 * (1.0 - q) * lambda / (2.0 - q); }

double lq_alpha(double lambda, double q) {
  const double beta = lq_beta(lambda, q);
  return (lambda - beta) * std::pow(beta, 1.0 - q) / q;
}

double penalty_value(const PenaltySpec& spec, double x) {
  spec.validate();
  const double lam = spec.lambda;
  const double ax = std::abs(x);
  switch (spec.family) {
    case PenaltyFamily::Hard:
      return ax == 0.0 ? 0.0 : 0.5 * lam * lam;
    case PenaltyFamily::Soft:
      return lam * ax;
    case PenaltyFamily::Scad: {
      const double a = spec.scad_a;
      if (ax < lam) return lam * ax;
      if (ax < a * lam) return (2.0 * a * lam * ax - ax * ax - lam * lam) / (2.0 * (a - 1.0));
      return (a + 1.0) * lam * lam / 2.0;
    }
    case PenaltyFamily::Lq:
      if (ax == 0.0 || lam == 0.0) return 0.0;
      return lq_alpha(lam, spec.q) * std::pow(ax, spec.q);
  }
  return 0.0;
}

double offdiag_penalty(const PenaltySpec& spec, const SymMat& m) {
  double total = 0.0;
  const int d = m.dim();
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) total += penalty_value(spec, m(i, j));
  }
  return 2.0 * total;
}

double lq_newton(double alpha, double q, double x_abs, double beta) {
  auto h = [&](double eta) { return alpha * q * std::pow(eta, q - 1.0) + eta - x_abs; };
  auto dh = [&](double eta) { return 1.0 - alpha * q * (1.0 - q) * std::pow(eta, q - 2.0); };
  const double tol = 1e-13 * std::max(1.0, x_abs);

  if (!(alpha >= 0.0) || !(x_abs > 0.0) || !(beta > 0.0) || !(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::NewtonFailed, "invalid lq root-find arguments");
  }
  if (!(h(beta) < 0.0)) throw Error(ErrorKind::NewtonFailed, "no root bracketed in (beta, |x|)");

  double eta = x_abs;
  for (int it = 0; it < 200; ++it) {
    const double value = h(eta);
    if (std::abs(value) <= tol) return eta;
    const double slope = dh(eta);
    if (!(slope > 0.0)) break;
    const double next = eta - value / slope;
    if (!(next > beta && next <= x_abs)) break;
    if (next == eta) return eta;
    eta = next;
  }

  // Bisection on [beta, x_abs]: h(beta) < 0 < h(x_abs) and h is increasing there.
  double lo = beta, hi = x_abs;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = h(mid);
    if (std::abs(value) <= tol || mid == lo || mid == hi) return mid;
    (value < 0.0 ? lo : hi) = mid;
  }
  throw Error(ErrorKind::NewtonFailed, "lq root-find did not converge");
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double soft_rule(double x, double tau) { return sign(x) * std::max(std::abs(x) - tau, 0.0); }

double lq_rule(double x, double lambda, double q) {
  const double ax = std::abs(x);
  // At |x| == lambda both 0 and sign(x) beta minimize; keep the sparser one.
  if (ax <= lambda) return 0.0;
  return sign(x) * lq_newton(lq_alpha(lambda, q), q, ax, lq_beta(lambda, q));
}

// Weighted SCAD prox when (a - 1) w <= 1: the middle piece is concave, so the
// minimizer is one of the piece endpoints or the soft-region stationary point.
double scad_by_candidates(const PenaltySpec& spec, double x, double w) {
  const double lam = spec.lambda, a = spec.scad_a, ax = std::abs(x);
  const std::array<double, 5> candidates = {0.0, std::clamp(ax - lam / w, 0.0, lam), lam, a * lam,
                                            std::max(ax, a * lam)};
  double best = 0.0, best_value = INFINITY;
  for (double z : candidates) {
    const double value = 0.5 * w * (z - ax) * (z - ax) + penalty_value(spec, z);
    if (value < best_value || (value == best_value && z < best)) {
      best = z;
      best_value = value;
    }
  }
  return sign(x) * best;
}

}  // namespace

double threshold(const PenaltySpec& spec, double x) {
  spec.validate();
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "threshold input");
  const double lam = spec.lambda;
  if (lam == 0.0) return x;
  const double ax = std::abs(x);
  switch (spec.family) {
    case PenaltyFamily::Hard:
      return ax > lam ? x : 0.0;
    case PenaltyFamily::Soft:
      return soft_rule(x, lam);
    case PenaltyFamily::Scad: {
      const double a = spec.scad_a;
      if (ax <= 2.0 * lam) return soft_rule(x, lam);
      if (ax <= a * lam) return ((a - 1.0) * x - sign(x) * a * lam) / (a - 2.0);
      return x;
    }
    case PenaltyFamily::Lq:
      return lq_rule(x, lam, spec.q);
  }
  return x;
}

double weighted_threshold(const PenaltySpec& spec, double x, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorKind::InvalidArgument, "proximal weight must be positive");
  }
  if (weight == 1.0) return threshold(spec, x);
  spec.validate();
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "threshold input");
  const double lam = spec.lambda;
  if (lam == 0.0) return x;
  const double ax = std::abs(x);
  switch (spec.family) {
    case PenaltyFamily::Soft:
      return soft_rule(x, lam / weight);
    case PenaltyFamily::Hard:
      return ax > lam / std::sqrt(weight) ? x : 0.0;
    case PenaltyFamily::Scad: {
      const double a = spec.scad_a;
      const double curvature = (a - 1.0) * weight;
      if (curvature <= 1.0) return scad_by_candidates(spec, x, weight);
      if (ax <= lam * (1.0 + 1.0 / weight)) return soft_rule(x, lam / weight);
      if (ax <= a * lam) return sign(x) * (curvature * ax - a * lam) / (curvature - 1.0);
      return x;
    }
    case PenaltyFamily::Lq:
      // alpha(lambda, q) scales as lambda^(2-q), so alpha / w = alpha(lambda w^(-1/(2-q)), q).
      return lq_rule(x, lam * std::pow(weight, -1.0 / (2.0 - spec.q)), spec.q);
  }
  return x;
}

SymMat apply_offdiag_threshold(const SymMat& m, const PenaltySpec& spec) {
  spec.validate();
  Eigen::MatrixXd out = m.mat();
  const int d = m.dim();
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      const double t = threshold(spec, m(i, j));
      out(i, j) = t;
      out(j, i) = t;
    }
  }
  return SymMat(out);
}

}  // namespace pdcov
