#include "pdcov/linalg.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pdcov {

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has NaN or Inf entries");
}

}  // namespace

SymMat::SymMat(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::BadDim, "symmetric matrix must be square with dim >= 1, got " +
                                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  require_finite(m);
  data_ = 0.5 * (m + m.transpose());
}

SymMat SymMat::identity(int d) { return SymMat(Eigen::MatrixXd::Identity(d, d)); }

SymMat SymMat::zeros(int d) { return SymMat(Eigen::MatrixXd::Zero(d, d)); }

SymMat SymMat::diagonal(const Eigen::VectorXd& diag) { return SymMat(Eigen::MatrixXd(diag.asDiagonal())); }

SymMat operator+(const SymMat& a, const SymMat& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "matrix sum");
  return SymMat(a.data_ + b.data_, SymMat::Trusted{});
}

SymMat operator-(const SymMat& a, const SymMat& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "matrix difference");
  return SymMat(a.data_ - b.data_, SymMat::Trusted{});
}

SymMat operator*(double s, const SymMat& a) {
  if (!std::isfinite(s)) throw Error(ErrorKind::NonFinite, "scalar factor");
  return SymMat(s * a.data_, SymMat::Trusted{});
}

EigenPair eig_sym(const SymMat& m) {
  const int d = m.dim();
  EigenPair out;
  if (d == 1) {
    out.values = Eigen::VectorXd::Constant(1, m(0, 0));
    out.vectors = Eigen::MatrixXd::Ones(1, 1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eigensolver did not converge");

  // Eigen returns ascending order; flip to descending.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (int j = 0; j < d; ++j) {
    Eigen::Index arg = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, j) < 0.0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

bool is_pd_shifted(const SymMat& m, double shift) {
  Eigen::MatrixXd shifted = m.mat();
  shifted.diagonal().array() -= shift;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  return llt.info() == Eigen::Success;
}

SymMat spectral_floor(const SymMat& m, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "spectral floor needs eps > 0");
  if (m.dim() == 1) return SymMat(Eigen::MatrixXd::Constant(1, 1, std::max(m(0, 0), eps)));
  // Already inside {X >= eps I}: the projection is the identity map.
  if (is_pd_shifted(m, eps)) return m;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eigensolver did not converge");
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(eps);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  return SymMat(v * clipped.asDiagonal() * v.transpose());
}

double min_eigenvalue(const SymMat& m) {
  if (m.dim() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eigensolver did not converge");
  return solver.eigenvalues()(0);
}

double frob_norm(const SymMat& m) { return m.mat().norm(); }

double spec_norm(const SymMat& m) {
  if (m.dim() == 1) return std::abs(m(0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eigensolver did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SymMat hadamard_div(const SymMat& a, const SymMat& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "hadamard_div operands differ in size");
  const int d = a.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (b(i, j) == 0.0) {
        throw Error(ErrorKind::DivByZero,
                    "divisor entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is zero");
      }
    }
  }
  return SymMat(a.mat().cwiseQuotient(b.mat()));
}

namespace {

Eigen::MatrixXd read_values(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw Error(ErrorKind::Parse, "expected value at row " + std::to_string(i) + ", column " +
                                          std::to_string(j));
      }
    }
  }
  return m;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  return out;
}

}  // namespace

SymMat read_sym(std::istream& in) {
  long d = 0;
  if (!(in >> d) || d < 1) throw Error(ErrorKind::Parse, "first line must be a positive dimension");
  const Eigen::MatrixXd m = read_values(in, d, d);
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, "matrix file has NaN or Inf entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw Error(ErrorKind::Parse, "matrix is not symmetric (max |m_ij - m_ji| = " + std::to_string(asym) + ")");
  }
  return SymMat(m);
}

SymMat read_sym_file(const std::string& path) {
  auto in = open_in(path);
  return read_sym(in);
}

void write_sym(std::ostream& out, const SymMat& m) {
  const int d = m.dim();
  out << d << '\n' << std::setprecision(17);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

void write_sym_file(const std::string& path, const SymMat& m) {
  auto out = open_out(path);
  write_sym(out, m);
}

Eigen::MatrixXd read_dense(std::istream& in) {
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw Error(ErrorKind::Parse, "first line must be \"rows cols\"");
  }
  return read_values(in, rows, cols);
}

Eigen::MatrixXd read_dense_file(const std::string& path) {
  auto in = open_in(path);
  return read_dense(in);
}

void write_dense(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

void write_dense_file(const std::string& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  write_dense(out, m);
}

}  // namespace pdcov
