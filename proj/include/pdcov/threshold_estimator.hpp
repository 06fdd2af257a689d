#pragma once

#include "pdcov/linalg.hpp"
#include "pdcov/penalty.hpp"

namespace pdcov {

// Off-diagonal entries with |value| below this count as zero in sparsity figures.
inline constexpr double kSparsityCutoff = 1e-5;

struct ThresholdReport {
  SymMat estimate;
  double min_eig = 0.0;
  double sparsity_offdiag = 0.0;
  bool is_pd = false;
};

// Fraction of off-diagonal entries with |m_ij| < kSparsityCutoff; 1 when d == 1.
double offdiag_sparsity(const SymMat& m);

// Throws NotCorrelation unless every diagonal entry is within 1e-9 of one.
void require_correlation(const SymMat& s);

// Elementwise generalized thresholding of a sample correlation matrix, with the
// minimum-eigenvalue check that decides whether an iterative solve is needed.
ThresholdReport generalized_threshold_estimate(const SymMat& s, const PenaltySpec& spec);

}  // namespace pdcov
