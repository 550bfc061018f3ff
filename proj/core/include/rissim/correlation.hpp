#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rissim/common.hpp"
#include "rissim/random.hpp"

namespace rissim {

/// sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
double sinc(double x);

/// Spatial correlation of the RIS aperture with its factorization.
///
/// entries(n, m) = sinc(2 ||u_n - u_m|| / lambda). The factor L satisfies
/// L L^T ~= R and is obtained by symmetric eigendecomposition with negative
/// eigenvalues clipped at zero; sinc kernels at sub-halfwavelength spacing
/// are numerically rank deficient, so a Cholesky factor does not exist.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;

  int dim() const { return static_cast<int>(entries_.rows()); }
  const MatR& entries() const { return entries_; }
  const MatR& factor() const { return factor_; }

  /// EMI correlation; defaults to the channel correlation itself unless
  /// overridden.
  const MatR& emi_entries() const { return r_e_ ? *r_e_ : entries_; }
  void set_emi_correlation(MatR r_e);

  double min_eigenvalue_before_clip() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  /// max |L L^T - R| over all entries.
  double factorization_error() const { return factor_err_; }

  /// Sum of squared off-diagonal entries (used by the fourth-moment terms of
  /// the analytic evaluator).
  double offdiag_sq_sum() const { return offdiag_sq_; }

  /// Draws sqrt(scale) * L * w with w i.i.d. circularly symmetric standard
  /// complex normal; zero mean, covariance scale * R.
  VecC sample(double scale, RngStream& rng) const;

  /// In-place variant writing into `out` (hot path of the simulator).
  void sample_into(double scale, RngStream& rng, VecC& scratch, VecC& out) const;

  void write_csv(const std::string& path) const;

  friend CorrelationMatrix build_correlation(const std::vector<Vec3>& positions, double lambda);

 private:
  MatR entries_;
  MatR factor_;
  MatC factor_c_;  // complex copy of the factor for sampling products
  std::optional<MatR> r_e_;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
  double factor_err_ = 0.0;
  double offdiag_sq_ = 0.0;
};

/// Builds the sinc-kernel correlation matrix for the given element positions.
CorrelationMatrix build_correlation(const std::vector<Vec3>& positions, double lambda);

/// Free-function sampling wrapper.
VecC sample_correlated(double scale, const CorrelationMatrix& corr, RngStream& rng);

}  // namespace rissim
