#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdcov/linalg.hpp"

namespace pdcov {

// n observations of a d-dimensional vector, one per row.
class SampleSet {
 public:
  explicit SampleSet(Eigen::MatrixXd rows);

  int n() const { return static_cast<int>(rows_.rows()); }
  int d() const { return static_cast<int>(rows_.cols()); }
  const Eigen::MatrixXd& rows() const { return rows_; }

  // Observations at the given row indices, in that order.
  SampleSet subset(const std::vector<int>& index) const;

 private:
  Eigen::MatrixXd rows_;
};

// (1/n) sum (x_t - mean)(x_t - mean)^T when `center`, else (1/n) sum x_t x_t^T.
SymMat sample_cov(const SampleSet& s, bool center = true);

// S_ij = R_ij / sqrt(R_ii R_jj), with the diagonal set to exactly 1.
SymMat cov_to_corr(const SymMat& r);

// diag(R)^(1/2) Theta diag(R)^(1/2).
SymMat corr_to_cov(const SymMat& theta_hat, const SymMat& r);

// Sample correlation of centered data; shorthand for cov_to_corr(sample_cov(s)).
SymMat sample_corr(const SampleSet& s);

// One observation per line, no header, values separated by commas and/or whitespace.
SampleSet read_samples(std::istream& in);
SampleSet read_samples_file(const std::string& path);
void write_samples_file(const std::string& path, const SampleSet& s);

}  // namespace pdcov
