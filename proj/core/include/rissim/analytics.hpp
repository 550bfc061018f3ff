#pragma once

#include <vector>

#include "rissim/channel.hpp"
#include "rissim/common.hpp"
#include "rissim/config.hpp"
#include "rissim/correlation.hpp"
#include "rissim/estimation.hpp"

namespace rissim {

/// Thrown when the precoder normalization degenerates (no estimated energy).
class DegenerateConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-(UE, symbol) SINR decomposition: desired-signal power, beamforming
/// uncertainty, inter-user interference, EMI power at the UE, UE noise.
struct SinrBreakdown {
  int k = 0;
  int n = 0;
  double i0 = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double i4 = 0.0;
  double zeta_sq = 0.0;
  double gamma = 0.0;
};

/// Closed-form SINR/SE evaluator.
///
/// The exact model evaluates every second and fourth moment of the
/// estimate/error rows under the full channel statistics, including the
/// contributions induced by the BS-RIS channel being common to all UEs'
/// cascades and to the estimator corruption; these scale like N_t/M and are
/// required for tight agreement with the simulator at moderate M. The
/// iid-Gaussian and simplified models are retained for comparison (see README).
class SinrAnalytics {
 public:
  SinrAnalytics(const SystemConfig& cfg, const LargeScaleParams& lsp, const EstimationStats& stats,
                const CorrelationMatrix* corr);

  double zeta_sq(int n) const;
  SinrBreakdown evaluate(int k, int n) const { return evaluate(k, n, model_); }
  SinrBreakdown evaluate(int k, int n, TermModel model) const;

  /// Estimate-row variance per entry at symbol n.
  double v_estimate(int k, int n, TermModel model) const;
  /// Error-row variance per entry at symbol n.
  double v_error(int k, int n, TermModel model) const;

  /// Per-UE achievable spectral efficiency over the data symbols.
  double spectral_efficiency_ue(int k) const;
  double sum_spectral_efficiency() const;

  const EstimationStats& stats() const { return stats_; }

 private:
  double term_i1_exact(int k, double r0, double r1) const;
  double term_i2_exact(int k, int j, double r0, double r1) const;
  double f_cc(int k, int j) const;  // E|(X Phi g_k)^H (X Phi g_j)|^2, indep g's
  double f_ce(int k) const;         // E|(X Phi g_k)^H (X e)|^2
  double var_h(int k) const;        // Var(||X Phi g_k||^2)

  const SystemConfig& cfg_;
  const LargeScaleParams& lsp_;
  EstimationStats stats_;
  TermModel model_;
  int n_t_;
  int m_;
  double r2od_ = 0.0;        // sum of squared off-diagonal correlation entries
  double i3_diag_ = 0.0;     // sum_m R_mm * Re_mm (reflection-averaged trace)
  double sc2_over_p_ = 0.0;
};

/// Normalization of the MRT precoder with expectation-replaced trace:
/// 1 / sum_k N_t (rho0^2 var_ghat_d,k + M rho1^2 var_ghat_c,k).
double zeta_sq_deterministic(const EstimationStats& stats, const AgingProfile& profile, int n,
                             int n_t, int m);

/// Desired-signal power: zeta^2 (N_t (rho0^2 var_ghat_d + M rho1^2 var_ghat_c))^2.
double term_i0(const UeEstimationStats& stats_k, const AgingProfile& profile, int n, int n_t,
               int m, double zeta_sq);

/// EMI power at the UE for an explicit reflection state:
/// a_elem^2 beta_r sigma_e^2 tr(Phi^H R Phi R_e).
double term_i3(double a_elem, double beta_r_k, double sigma_e_sq, const RisPanel& panel,
               const CorrelationMatrix& corr);

/// Reflection-averaged EMI power at the UE.
double term_i3_avg(double a_elem, double beta_r_k, double sigma_e_sq,
                   const CorrelationMatrix& corr);

/// UE noise power.
double term_i4(double sigma_k_sq);

/// (1/tau_c) sum log2(1 + gamma_n) over the data symbols.
double spectral_efficiency(const std::vector<double>& gammas, int tau_c);

}  // namespace rissim
