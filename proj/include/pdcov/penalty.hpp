#pragma once

#include <string>

#include "pdcov/linalg.hpp"

namespace pdcov {

enum class PenaltyFamily { Hard, Soft, Scad, Lq };

const char* to_string(PenaltyFamily family);
PenaltyFamily parse_penalty_family(const std::string& name);

struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Soft;
  double lambda = 0.0;
  double scad_a = 3.7;
  double q = 0.5;

  // Throws InvalidArgument when lambda < 0, scad_a <= 2 (Scad) or q outside (0, 1) (Lq).
  void validate() const;

  // Same family and shape parameters at another lambda.
  PenaltySpec with_lambda(double new_lambda) const;

  static PenaltySpec hard(double lambda);
  static PenaltySpec soft(double lambda);
  static PenaltySpec scad(double lambda, double a = 3.7);
  static PenaltySpec lq(double lambda, double q = 0.5);
};

// Scalar penalty g_lambda(x). The hard-thresholding family uses the l0 form
// (lambda^2 / 2) 1{x != 0}, whose proximal map is x 1{|x| > lambda}.
double penalty_value(const PenaltySpec& spec, double x);

// Sum of penalty_value over the off-diagonal entries of m.
double offdiag_penalty(const PenaltySpec& spec, const SymMat& m);

// Thresholding rule T_lambda(x) = argmin_z 1/2 (z - x)^2 + g_lambda(z).
double threshold(const PenaltySpec& spec, double x);

// Weighted proximal map argmin_z (weight / 2)(z - x)^2 + g_lambda(z).
// weight = 1 reproduces threshold(); for soft thresholding this is
// T_{lambda / weight}. Requires weight > 0.
double weighted_threshold(const PenaltySpec& spec, double x, double weight);

// Larger root of h(eta) = alpha q eta^(q-1) + eta - x_abs on (beta, x_abs],
// by Newton from eta = x_abs with a bisection fallback.
double lq_newton(double alpha, double q, double x_abs, double beta);

// beta = 2(1-q) lambda / (2-q) and alpha = (lambda - beta) beta^(1-q) / q.
double lq_beta(double lambda, double q);
double lq_alpha(double lambda, double q);

// Replaces each off-diagonal entry by threshold(spec, m_ij); the diagonal is kept.
SymMat apply_offdiag_threshold(const SymMat& m, const PenaltySpec& spec);

}  // namespace pdcov
