#include "pdcov/sample_stats.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace pdcov {

SampleSet::SampleSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 2) {
    throw Error(ErrorKind::TooFewSamples, "need at least 2 observations, got " + std::to_string(rows_.rows()));
  }
  if (rows_.cols() < 1) throw Error(ErrorKind::BadDim, "observations must have at least one coordinate");
  if (!rows_.allFinite()) throw Error(ErrorKind::NonFinite, "sample data has NaN or Inf entries");
}

SampleSet SampleSet::subset(const std::vector<int>& index) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(index.size()), rows_.cols());
  for (std::size_t k = 0; k < index.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = rows_.row(index[k]);
  return SampleSet(std::move(out));
}

SymMat sample_cov(const SampleSet& s, bool center) {
  const double n = static_cast<double>(s.n());
  if (!center) return SymMat(s.rows().transpose() * s.rows() / n);
  const Eigen::RowVectorXd mean = s.rows().colwise().mean();
  const Eigen::MatrixXd centered = s.rows().rowwise() - mean;
  return SymMat(centered.transpose() * centered / n);
}

SymMat cov_to_corr(const SymMat& r) {
  const int d = r.dim();
  Eigen::VectorXd inv_sd(d);
  for (int i = 0; i < d; ++i) {
    if (!(r(i, i) > 0.0)) throw Error(ErrorKind::ZeroVariance, "variance of coordinate " + std::to_string(i) + " is not positive");
    inv_sd(i) = 1.0 / std::sqrt(r(i, i));
  }
  Eigen::MatrixXd s = inv_sd.asDiagonal() * r.mat() * inv_sd.asDiagonal();
  s.diagonal().setOnes();
  return SymMat(s);
}

SymMat corr_to_cov(const SymMat& theta_hat, const SymMat& r) {
  if (theta_hat.dim() != r.dim()) throw Error(ErrorKind::DimMismatch, "corr_to_cov operands differ in size");
  const int d = r.dim();
  Eigen::VectorXd sd(d);
  for (int i = 0; i < d; ++i) {
    if (!(r(i, i) > 0.0)) throw Error(ErrorKind::ZeroVariance, "variance of coordinate " + std::to_string(i) + " is not positive");
    sd(i) = std::sqrt(r(i, i));
  }
  return SymMat(sd.asDiagonal() * theta_hat.mat() * sd.asDiagonal());
}

SymMat sample_corr(const SampleSet& s) { return cov_to_corr(sample_cov(s, true)); }

SampleSet read_samples(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
      }
      row.push_back(value);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(rows.front().size()) + " values, got " +
                                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::TooFewSamples, "no observations found");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return SampleSet(std::move(m));
}

SampleSet read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_samples(in);
}

void write_samples_file(const std::string& path, const SampleSet& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << std::setprecision(17);
  for (int i = 0; i < s.n(); ++i) {
    for (int j = 0; j < s.d(); ++j) out << (j ? "," : "") << s.rows()(i, j);
    out << '\n';
  }
}

}  // namespace pdcov
