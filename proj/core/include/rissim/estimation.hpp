#pragma once

#include <string>
#include <vector>

#include "rissim/channel.hpp"
#include "rissim/common.hpp"
#include "rissim/config.hpp"
#include "rissim/pilots.hpp"

namespace rissim {

/// Deterministic second-order statistics of the channel estimators for one UE.
///
/// The scalar MMSE coefficient for the cascaded link and its estimate/error
/// variances are kept self-consistent: var_ghat_c = coef_cascade * xi_ck is
/// exactly the variance the estimator achieves on an observation with the
/// modeled mixture variance obs_denom. The *_alt fields carry the
/// alternative bookkeeping in which the EMI term of the error budget is not
/// scaled by the pilot power; they are reported for reference and coincide
/// with the operative values when p_tau_p = 1 W.
struct UeEstimationStats {
  double beta_d = 0.0;
  double beta_r = 0.0;
  double xi_ck = 0.0;          ///< per-element cascaded channel variance
  double sigma_e1_sq = 0.0;    ///< p_tau_p * xi * (sigma_d^2 + p_tau_p beta_d)
  double sigma_e2_sq = 0.0;    ///< p_tau_p * beta_d * (sigma_d^2 + sigma_c^2)
  double sigma_e3_sq = 0.0;    ///< q * (sigma_d^2 + p_tau_p beta_d)
  double var_ghat_d = 0.0;
  double var_gtilde_d = 0.0;
  double coef_direct = 0.0;    ///< shrinkage (1 + sigma_d^2/(p beta_d))^-1
  double obs_denom = 0.0;      ///< var_gtilde_d + xi + q + sigma_c^2/p
  double coef_cascade = 0.0;   ///< xi / obs_denom
  double var_ghat_c = 0.0;     ///< xi^2 / obs_denom
  double var_gtilde_c = 0.0;   ///< xi - var_ghat_c
  double var_ghat_c_alt = 0.0;
  double var_gtilde_c_alt = 0.0;
};

struct EstimationStats {
  int m = 0;
  double a_elem = 0.0;
  double kappa = 0.0;
  double nlos_weight = 0.0;  ///< variance weight of the BS-RIS NLoS component
  double wbar = 0.0;         ///< (kappa + nlos_weight) / (kappa + 1)
  double q = 0.0;            ///< EMI corruption power in the cascade pilot
  double sigma_e_sq = 0.0;
  double p_tau_p = 0.0;
  double sigma_d_sq = 0.0;
  double sigma_c_sq = 0.0;
  std::vector<UeEstimationStats> ue;

  /// tr_re defaults to M (unit-diagonal EMI correlation).
  static EstimationStats build(const SystemConfig& cfg, const LargeScaleParams& lsp,
                               double tr_re = -1.0);

  void write_csv(const std::string& path) const;
};

/// Uplink pilot observation of the direct link:
/// sqrt(p_tau_p) G_d Psi^H + Z_d, noise i.i.d. CN(0, sigma_d_sq).
MatC receive_pilot_direct(const MatC& g_d, const PilotBook& pilots, double p_tau_p,
                          double sigma_d_sq, RngStream& rng);

/// Projects the observation onto UE k's pilot: (1/sqrt(p)) y phi_k.
VecC despread(const MatC& y, const VecC& pilot_k, double p_tau_p);

/// Scalar MMSE shrinkage of the despread direct observation.
VecC mmse_direct(const VecC& y_tilde, double beta_d_k, double sigma_d_sq, double p_tau_p);

/// Despread cascade observation for UE k with the direct-channel estimate
/// subtracted: residual direct error + unreflected cascade + EMI through the
/// BS-RIS channel + receiver noise. `emi_n` holds tau_p independent EMI
/// columns with covariance a_elem*sigma_e_sq*R.
VecC receive_pilot_cascade(const MatC& g_d, const MatC& g_br, const MatC& g_r_ue,
                           const PilotBook& pilots, double p_tau_p, const MatC& emi_n,
                           double sigma_c_sq, const VecC& ghat_d_k, int k, RngStream& rng);

/// Scalar MMSE shrinkage of the despread cascade observation.
VecC mmse_cascade(const VecC& y_tilde_c, const UeEstimationStats& stats);

/// Variances of the combined estimation-error + aging terms at symbol n:
/// (beta_d - rho0^2 var_ghat_d, xi - rho1^2 var_ghat_c).
std::pair<double, double> aged_error_variances(const UeEstimationStats& stats,
                                               const AgingProfile& profile, int n);

}  // namespace rissim
