#include "pdcov/threshold_estimator.hpp"

#include <cmath>

namespace pdcov {

double offdiag_sparsity(const SymMat& m) {
  const int d = m.dim();
  if (d == 1) return 1.0;
  long zeros = 0;
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      if (std::abs(m(i, j)) < kSparsityCutoff) ++zeros;
    }
  }
  const long pairs = static_cast<long>(d) * (d - 1) / 2;
  return static_cast<double>(zeros) / static_cast<double>(pairs);
}

void require_correlation(const SymMat& s) {
  for (int i = 0; i < s.dim(); ++i) {
    if (std::abs(s(i, i) - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotCorrelation,
                  "diagonal entry " + std::to_string(i) + " is " + std::to_string(s(i, i)) + ", expected 1");
    }
  }
}

ThresholdReport generalized_threshold_estimate(const SymMat& s, const PenaltySpec& spec) {
  require_correlation(s);
  Eigen::MatrixXd est = apply_offdiag_threshold(s, spec).mat();
  est.diagonal().setOnes();
  ThresholdReport report;
  report.estimate = SymMat(est);
  report.min_eig = min_eigenvalue(report.estimate);
  report.sparsity_offdiag = offdiag_sparsity(report.estimate);
  report.is_pd = report.min_eig > 0.0;
  return report;
}

}  // namespace pdcov
