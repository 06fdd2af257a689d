#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "pdcov/error.hpp"

namespace pdcov {

// Dense symmetric matrix. Every construction symmetrizes the input as
// (M + M^T) / 2, so element (i, j) and (j, i) are bitwise equal.
class SymMat {
 public:
  SymMat() : SymMat(Eigen::MatrixXd::Zero(1, 1)) {}
  explicit SymMat(const Eigen::MatrixXd& m);

  static SymMat identity(int d);
  static SymMat zeros(int d);
  static SymMat diagonal(const Eigen::VectorXd& diag);

  int dim() const { return static_cast<int>(data_.rows()); }
  const Eigen::MatrixXd& mat() const { return data_; }
  double operator()(int i, int j) const { return data_(i, j); }
  Eigen::VectorXd diag() const { return data_.diagonal(); }

  friend SymMat operator+(const SymMat& a, const SymMat& b);
  friend SymMat operator-(const SymMat& a, const SymMat& b);
  friend SymMat operator*(double s, const SymMat& a);

 private:
  struct Trusted {};
  SymMat(Eigen::MatrixXd m, Trusted) : data_(std::move(m)) {}

  Eigen::MatrixXd data_;
};

// Eigenvalues in descending order; column i of `vectors` pairs with values[i].
// Each eigenvector has its largest-magnitude component positive.
struct EigenPair {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPair eig_sym(const SymMat& m);

// Eigenvalue clipping: sum_i max(lambda_i, eps) v_i v_i^T. Returns `m` itself
// when it already satisfies m >= eps I.
SymMat spectral_floor(const SymMat& m, double eps);

double min_eigenvalue(const SymMat& m);
double frob_norm(const SymMat& m);
double spec_norm(const SymMat& m);

// Elementwise a / b. Throws DivByZero naming the first zero entry of b.
SymMat hadamard_div(const SymMat& a, const SymMat& b);

// True when m - shift I admits a Cholesky factorization.
bool is_pd_shifted(const SymMat& m, double shift);

// Matrix text format: first line d, then d rows of d values. The reader
// rejects asymmetry above 1e-9 and symmetrizes what it accepts.
SymMat read_sym(std::istream& in);
SymMat read_sym_file(const std::string& path);
void write_sym(std::ostream& out, const SymMat& m);
void write_sym_file(const std::string& path, const SymMat& m);

// Rectangular variant used for sampling matrices: first line "rows cols".
Eigen::MatrixXd read_dense(std::istream& in);
Eigen::MatrixXd read_dense_file(const std::string& path);
void write_dense(std::ostream& out, const Eigen::MatrixXd& m);
void write_dense_file(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace pdcov
