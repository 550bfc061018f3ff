#pragma once

#include <utility>

#include "rissim/common.hpp"
#include "rissim/config.hpp"
#include "rissim/correlation.hpp"
#include "rissim/random.hpp"

namespace rissim {

/// Temporal correlation coefficient J0(2 pi n fd_ts).
double jakes_rho(int n, double fd_ts);

/// RIS reflection state: unit-amplitude per-element phase shifts.
class RisPanel {
 public:
  RisPanel() = default;
  explicit RisPanel(VecC reflection) : v_(std::move(reflection)) {
    for (Eigen::Index i = 0; i < v_.size(); ++i)
      if (std::abs(std::abs(v_(i)) - 1.0) > 1e-12)
        throw InvalidInput("RisPanel: reflection coefficients must be unit modulus");
  }

  static RisPanel random(int m, RngStream& rng) {
    VecC v(m);
    rng.fill_unit_phases(v);
    return RisPanel(std::move(v));
  }

  int m() const { return static_cast<int>(v_.size()); }
  const VecC& reflection_vector() const { return v_; }
  MatC reflection_matrix() const { return MatC(v_.asDiagonal()); }
  cdouble phase_sum() const { return v_.sum(); }

 private:
  VecC v_;
};

/// Channel aging law shared by the direct and RIS-side links.
struct AgingProfile {
  double fd_ts = 0.0;
  double rho0(int n) const { return jakes_rho(n, fd_ts); }
  double rho1(int n) const { return jakes_rho(n, fd_ts); }
  double rho_bar0(int n) const { return std::sqrt(std::max(0.0, 1.0 - rho0(n) * rho0(n))); }
  double rho_bar1(int n) const { return std::sqrt(std::max(0.0, 1.0 - rho1(n) * rho1(n))); }
};

/// BS-RIS channel: sqrt(beta_br) ( sqrt(k/(k+1)) LoS + sqrt(nlos_variance/(k+1)) NLoS )
/// with LoS entries exp(j theta) from `los_phases` and i.i.d. complex normal
/// NLoS entries. `nlos_variance` is 1 for the unit convention or the element
/// area for the area convention.
MatC gen_bs_ris(double beta_br, double kappa, const MatR& los_phases, double nlos_variance,
                RngStream& rng);

/// RIS-UE channel: correlated complex normal with covariance a_elem*beta_r*R.
VecC gen_ris_ue(double a_elem, double beta_r_k, const CorrelationMatrix& corr, RngStream& rng);

/// Cascade through the RIS: returns the per-element matrix with columns
/// g_br_m * g_r_m and the reflected effective vector (matrix * reflection).
std::pair<MatC, VecC> cascade(const MatC& g_br, const RisPanel& panel, const VecC& g_r_k);

/// Direct-link aging: rho0[n] g0 + rho_bar0[n] e, e ~ CN(0, beta_d I).
VecC evolve_direct(const VecC& g0, int n, const AgingProfile& profile, double beta_d_k,
                   RngStream& rng);

/// RIS-UE aging. With AgingInnovation::kCorrelated the innovation keeps the
/// initial-state covariance a_elem*beta_r*R (stationary marginals); the
/// iid_unit variant draws unit-variance i.i.d. entries instead.
VecC evolve_ris_ue(const VecC& g0, int n, const AgingProfile& profile, double a_elem,
                   double beta_r_k, const CorrelationMatrix& corr, RngStream& rng,
                   AgingInnovation innovation = AgingInnovation::kCorrelated);

/// One coherence block's channels for every UE.
struct ChannelRealization {
  MatC g_d;                 ///< N_t x K direct channels at block start
  MatC g_br;                ///< N_t x M BS-RIS channel (block constant)
  MatC g_r;                 ///< M x K RIS-UE channels at block start
  std::vector<MatC> g_c;    ///< per-UE N_t x M cascade matrices
  std::vector<VecC> g_c_eff;///< per-UE reflected effective cascades
  int symbol_index = 0;
};

/// Draws a full coherence block: direct channels, the Rician BS-RIS channel
/// with the given LoS phases, correlated RIS-UE channels and their cascades.
ChannelRealization generate_block(const SystemConfig& cfg, const LargeScaleParams& lsp,
                                  const CorrelationMatrix* corr, const RisPanel& panel,
                                  const MatR& los_phases, RngStream& rng);

}  // namespace rissim
