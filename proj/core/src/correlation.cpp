#include "rissim/correlation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rissim {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

CorrelationMatrix build_correlation(const std::vector<Vec3>& positions, double lambda) {
  if (positions.empty()) throw InvalidInput("build_correlation: positions must be nonempty");
  if (lambda <= 0.0) throw InvalidInput("build_correlation: lambda must be positive");
  for (const auto& p : positions)
    if (!p.allFinite()) throw InvalidInput("build_correlation: NaN/inf position");

  const int m = static_cast<int>(positions.size());
  CorrelationMatrix c;
  c.entries_.resize(m, m);
  for (int i = 0; i < m; ++i) {
    c.entries_(i, i) = 1.0;
    for (int j = i + 1; j < m; ++j) {
      const double r = sinc(2.0 * (positions[i] - positions[j]).norm() / lambda);
      c.entries_(i, j) = r;
      c.entries_(j, i) = r;
    }
  }

  Eigen::SelfAdjointEigenSolver<MatR> eig(c.entries_);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_correlation: eigendecomposition failed");
  VecR vals = eig.eigenvalues();
  c.min_eig_ = vals.minCoeff();
  c.max_eig_ = vals.maxCoeff();
  vals = vals.cwiseMax(0.0);
  c.factor_ = eig.eigenvectors() * vals.cwiseSqrt().asDiagonal();
  c.factor_c_ = c.factor_.cast<cdouble>();
  c.factor_err_ = (c.factor_ * c.factor_.transpose() - c.entries_).cwiseAbs().maxCoeff();
  c.offdiag_sq_ = c.entries_.squaredNorm() - m;  // diagonal is exactly 1
  return c;
}

void CorrelationMatrix::set_emi_correlation(MatR r_e) {
  if (r_e.rows() != entries_.rows() || r_e.cols() != entries_.cols())
    throw InvalidInput("set_emi_correlation: dimension mismatch");
  r_e_ = std::move(r_e);
}

VecC CorrelationMatrix::sample(double scale, RngStream& rng) const {
  VecC w(dim()), out(dim());
  sample_into(scale, rng, w, out);
  return out;
}

void CorrelationMatrix::sample_into(double scale, RngStream& rng, VecC& scratch, VecC& out) const {
  if (scale < 0.0) throw InvalidInput("sample_correlated: scale must be nonnegative");
  scratch.resize(dim());
  rng.fill_complex_normal(scratch);
  out.noalias() = factor_c_ * scratch;
  out *= std::sqrt(scale);
}

VecC sample_correlated(double scale, const CorrelationMatrix& corr, RngStream& rng) {
  return corr.sample(scale, rng);
}

void CorrelationMatrix::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[40];
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", entries_(i, j));
      out << buf << (j + 1 < dim() ? "," : "");
    }
    out << "\n";
  }
}

}  // namespace rissim
