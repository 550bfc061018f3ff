#include "rissim/analytics.hpp"

#include <cmath>

namespace rissim {

SinrAnalytics::SinrAnalytics(const SystemConfig& cfg, const LargeScaleParams& lsp,
                             const EstimationStats& stats, const CorrelationMatrix* corr)
    : cfg_(cfg),
      lsp_(lsp),
      stats_(stats),
      model_(cfg.term_model),
      n_t_(cfg.n_t),
      m_(cfg.m()),
      sc2_over_p_(cfg.sigma_c_sq / cfg.p_tau_p) {
  if (m_ > 0) {
    if (corr == nullptr || corr->dim() != m_)
      throw InvalidInput("SinrAnalytics: correlation matrix required for M > 0");
    r2od_ = corr->offdiag_sq_sum();
    i3_diag_ = corr->entries().diagonal().cwiseProduct(corr->emi_entries().diagonal()).sum();
  }
}

double SinrAnalytics::v_estimate(int k, int n, TermModel model) const {
  const AgingProfile prof{cfg_.fd_ts};
  const double r0 = prof.rho0(n), r1 = prof.rho1(n);
  const auto& u = stats_.ue.at(k);
  const double vc = model == TermModel::kSimplified ? u.var_ghat_c_alt : u.var_ghat_c;
  return r0 * r0 * u.var_ghat_d + m_ * r1 * r1 * vc;
}

double SinrAnalytics::v_error(int k, int n, TermModel model) const {
  const AgingProfile prof{cfg_.fd_ts};
  const double r0 = prof.rho0(n), r1 = prof.rho1(n);
  const auto& u = stats_.ue.at(k);
  const double vc = model == TermModel::kSimplified ? u.var_ghat_c_alt : u.var_ghat_c;
  return (u.beta_d - r0 * r0 * u.var_ghat_d) + m_ * (u.xi_ck - r1 * r1 * vc);
}

double SinrAnalytics::zeta_sq(int n) const {
  double trace = 0.0;
  for (int k = 0; k < cfg_.k_ue; ++k) trace += n_t_ * v_estimate(k, n, model_);
  if (trace <= 0.0) throw DegenerateConfig("precoder normalization: zero estimated energy");
  return 1.0 / trace;
}

// Fourth-moment helpers. X is the BS-RIS channel, Phi the reflection; the
// channel vectors below are independent given (X, Phi) and the expressions
// average over the LoS/reflection phases exactly.
double SinrAnalytics::f_cc(int k, int j) const {
  if (m_ == 0) return 0.0;
  const double w2 = stats_.wbar * stats_.wbar;
  const double eps = stats_.nlos_weight / (stats_.kappa + 1.0) *
                     (stats_.nlos_weight / (stats_.kappa + 1.0) +
                      2.0 * stats_.kappa / (stats_.kappa + 1.0));
  const double a2 = stats_.a_elem * stats_.a_elem * stats_.ue[k].beta_r * stats_.ue[j].beta_r *
                    lsp_.beta_br * lsp_.beta_br;
  const double m = m_, nt = n_t_;
  return a2 * (m * nt * nt * w2 + m * (m - 1.0) * nt * w2 + m * nt * eps + nt * nt * w2 * r2od_);
}

double SinrAnalytics::f_ce(int k) const {
  if (m_ == 0) return 0.0;
  const double w2 = stats_.wbar * stats_.wbar;
  const double eps = stats_.nlos_weight / (stats_.kappa + 1.0) *
                     (stats_.nlos_weight / (stats_.kappa + 1.0) +
                      2.0 * stats_.kappa / (stats_.kappa + 1.0));
  const double m = m_, nt = n_t_;
  return stats_.a_elem * stats_.ue[k].beta_r * stats_.a_elem * stats_.sigma_e_sq * m * nt *
         lsp_.beta_br * lsp_.beta_br * ((nt + m - 1.0) * w2 + eps);
}

double SinrAnalytics::var_h(int k) const {
  if (m_ == 0) return 0.0;
  const double w2 = stats_.wbar * stats_.wbar;
  const double eps = stats_.nlos_weight / (stats_.kappa + 1.0) *
                     (stats_.nlos_weight / (stats_.kappa + 1.0) +
                      2.0 * stats_.kappa / (stats_.kappa + 1.0));
  const double a2 = stats_.a_elem * stats_.a_elem * stats_.ue[k].beta_r * stats_.ue[k].beta_r *
                    lsp_.beta_br * lsp_.beta_br;
  const double m = m_, nt = n_t_;
  const double xi4 = a2 * (m * m * nt * nt * w2 + m * nt * (m - 1.0) * w2 + m * nt * nt * w2 +
                           2.0 * m * nt * eps + nt * (nt + 1.0) * w2 * r2od_);
  const double mean = nt * m * stats_.a_elem * stats_.ue[k].beta_r * lsp_.beta_br * stats_.wbar;
  return xi4 - mean * mean;
}

double SinrAnalytics::term_i1_exact(int k, double r0, double r1) const {
  const auto& u = stats_.ue[k];
  const double nt = n_t_, m = m_;
  const double r02 = r0 * r0, r12 = r1 * r1, rb2 = 1.0 - r12;
  const double c = u.coef_cascade, c2 = c * c;
  const double vd = u.var_ghat_d, vgd = u.var_gtilde_d, bd = u.beta_d;
  const double mxi = m * u.xi_ck;
  const double q = stats_.q, scp = sc2_over_p_;
  const double ed = bd - r02 * vd;

  double t = r02 * r02 * nt * vd * vd + r12 * r12 * c2 * var_h(k);
  // estimated direct row against the cascade estimate's pieces
  t += r02 * r12 * c2 * (vd * nt * mxi + m * vgd * nt * vd + nt * m * q * vd + m * scp * nt * vd);
  t += 2.0 * r02 * r12 * c * vd * nt * mxi;
  // true cascade against the direct estimate and vice versa
  t += r02 * r12 * vd * nt * mxi;
  // aged direct error against every precoder piece
  t += ed * nt * (r02 * vd + r12 * c2 * (mxi + m * q + m * scp));
  // the direct residual appears in both the error and the estimator corruption
  t += r12 * c2 * m * (r02 * nt * (nt + 1.0) * vgd * vgd + (1.0 - r02) * nt * bd * vgd);
  t += r12 * r12 * c2 * (vgd * m * nt * mxi + m * f_ce(k) + m * scp * nt * mxi);
  // cascade aging innovation against every precoder piece
  t += rb2 * (r02 * vd * nt * mxi +
              r12 * c2 * (f_cc(k, k) + m * vgd * nt * mxi + m * f_ce(k) + m * scp * nt * mxi));
  return t;
}

double SinrAnalytics::term_i2_exact(int k, int j, double r0, double r1) const {
  const auto& uk = stats_.ue[k];
  const auto& uj = stats_.ue[j];
  const double nt = n_t_, m = m_;
  const double r02 = r0 * r0, r12 = r1 * r1;
  const double cj2 = uj.coef_cascade * uj.coef_cascade;
  const double vj = r02 * uj.var_ghat_d + m * r12 * uj.var_ghat_c;
  const double mxi_k = m * uk.xi_ck;

  double s = nt * uk.beta_d * vj;                         // direct true channel x precoder j
  s += r02 * uj.var_ghat_d * nt * mxi_k;                  // cascade x direct estimate
  s += r12 * cj2 * m * (uj.var_gtilde_d + sc2_over_p_) * nt * mxi_k;
  s += r12 * cj2 * f_cc(k, j);                            // cascade x cascade estimate
  s += r12 * cj2 * m * f_ce(k);                           // cascade x EMI corruption
  return s;
}

SinrBreakdown SinrAnalytics::evaluate(int k, int n, TermModel model) const {
  const AgingProfile prof{cfg_.fd_ts};
  const double r0 = prof.rho0(n), r1 = prof.rho1(n);
  const auto& u = stats_.ue.at(k);

  SinrBreakdown b;
  b.k = k;
  b.n = n;
  // the normalization always uses the operative estimate variances so that
  // the three models decompose the same transmit strategy
  b.zeta_sq = zeta_sq(n);

  const double vk = v_estimate(k, n, model);
  const double ek = v_error(k, n, model);
  b.i0 = b.zeta_sq * (n_t_ * vk) * (n_t_ * vk);

  switch (model) {
    case TermModel::kExact:
      b.i1 = b.zeta_sq * term_i1_exact(k, r0, r1);
      for (int j = 0; j < cfg_.k_ue; ++j)
        if (j != k) b.i2 += b.zeta_sq * term_i2_exact(k, j, r0, r1);
      break;
    case TermModel::kIidGaussian:
      b.i1 = b.zeta_sq * n_t_ * vk * (ek + vk);
      for (int j = 0; j < cfg_.k_ue; ++j)
        if (j != k) b.i2 += b.zeta_sq * n_t_ * v_estimate(j, n, model) * (ek + vk);
      break;
    case TermModel::kSimplified: {
      b.i1 = b.zeta_sq * n_t_ * vk * ek;
      for (int j = 0; j < cfg_.k_ue; ++j) {
        if (j == k) continue;
        const auto& uj = stats_.ue[j];
        double vc_j = uj.var_ghat_c_alt;
        if (cfg_.i2_cross_weight == I2CrossWeight::kServing && uj.xi_ck > 0.0)
          vc_j *= u.xi_ck / uj.xi_ck;  // reuse UE k's xi inside UE j's factor
        const double vj = r0 * r0 * uj.var_ghat_d + m_ * r1 * r1 * vc_j;
        b.i2 += b.zeta_sq * n_t_ * vj * ek;
      }
      break;
    }
  }

  b.i3 = m_ > 0 ? stats_.a_elem * stats_.a_elem * u.beta_r * stats_.sigma_e_sq * i3_diag_ : 0.0;
  b.i4 = cfg_.sigma_k_sq;
  b.gamma = b.i0 / (b.i1 + b.i2 + b.i3 + b.i4);
  return b;
}

double SinrAnalytics::spectral_efficiency_ue(int k) const {
  std::vector<double> gammas;
  gammas.reserve(cfg_.tau_d());
  for (int n = 1; n <= cfg_.tau_d(); ++n) gammas.push_back(evaluate(k, n).gamma);
  return spectral_efficiency(gammas, cfg_.tau_c);
}

double SinrAnalytics::sum_spectral_efficiency() const {
  double s = 0.0;
  for (int k = 0; k < cfg_.k_ue; ++k) s += spectral_efficiency_ue(k);
  return s;
}

double zeta_sq_deterministic(const EstimationStats& stats, const AgingProfile& profile, int n,
                             int n_t, int m) {
  if (stats.ue.empty()) throw InvalidInput("zeta_sq_deterministic: need at least one UE");
  const double r0 = profile.rho0(n), r1 = profile.rho1(n);
  double trace = 0.0;
  for (const auto& u : stats.ue)
    trace += n_t * (r0 * r0 * u.var_ghat_d + m * r1 * r1 * u.var_ghat_c);
  if (trace <= 0.0) throw DegenerateConfig("zeta_sq_deterministic: zero estimated energy");
  return 1.0 / trace;
}

double term_i0(const UeEstimationStats& stats_k, const AgingProfile& profile, int n, int n_t,
               int m, double zeta_sq) {
  const double r0 = profile.rho0(n), r1 = profile.rho1(n);
  const double vk = r0 * r0 * stats_k.var_ghat_d + m * r1 * r1 * stats_k.var_ghat_c;
  return zeta_sq * (n_t * vk) * (n_t * vk);
}

double term_i3(double a_elem, double beta_r_k, double sigma_e_sq, const RisPanel& panel,
               const CorrelationMatrix& corr) {
  if (panel.m() == 0) return 0.0;
  if (panel.m() != corr.dim()) throw InvalidInput("term_i3: panel/correlation dimension mismatch");
  const VecC& v = panel.reflection_vector();
  const MatR& r = corr.entries();
  const MatR& re = corr.emi_entries();
  // tr(Phi^H R Phi R_e) = sum_{m,l} conj(v_m) R_{ml} v_l Re_{lm}
  cdouble tr = 0.0;
  for (int mm = 0; mm < corr.dim(); ++mm)
    for (int l = 0; l < corr.dim(); ++l) tr += std::conj(v(mm)) * r(mm, l) * v(l) * re(l, mm);
  return a_elem * a_elem * beta_r_k * sigma_e_sq * tr.real();
}

double term_i3_avg(double a_elem, double beta_r_k, double sigma_e_sq,
                   const CorrelationMatrix& corr) {
  const double diag = corr.entries().diagonal().cwiseProduct(corr.emi_entries().diagonal()).sum();
  return a_elem * a_elem * beta_r_k * sigma_e_sq * diag;
}

double term_i4(double sigma_k_sq) { return sigma_k_sq; }

double spectral_efficiency(const std::vector<double>& gammas, int tau_c) {
  if (tau_c <= static_cast<int>(gammas.size()))
    throw InvalidInput("spectral_efficiency: tau_c must exceed the data-symbol count");
  double s = 0.0;
  for (const double g : gammas) s += log2_1p(g);
  return s / tau_c;
}

}  // namespace rissim
