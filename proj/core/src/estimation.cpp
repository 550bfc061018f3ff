#include "rissim/estimation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rissim {

EstimationStats EstimationStats::build(const SystemConfig& cfg, const LargeScaleParams& lsp,
                                       double tr_re) {
  EstimationStats s;
  s.m = cfg.m();
  s.a_elem = cfg.a_elem;
  s.kappa = lsp.kappa;
  s.nlos_weight = cfg.cascade_nlos_weight == CascadeNlosWeight::kArea ? cfg.a_elem : 1.0;
  s.wbar = (lsp.kappa + s.nlos_weight) / (lsp.kappa + 1.0);
  s.sigma_e_sq = lsp.sigma_e_sq;
  s.p_tau_p = cfg.p_tau_p;
  s.sigma_d_sq = cfg.sigma_d_sq;
  s.sigma_c_sq = cfg.sigma_c_sq;
  if (tr_re < 0.0) tr_re = static_cast<double>(s.m);
  s.q = s.a_elem * s.sigma_e_sq * tr_re * lsp.beta_br * s.wbar;

  const double p = s.p_tau_p;
  for (int k = 0; k < cfg.k_ue; ++k) {
    UeEstimationStats u;
    u.beta_d = lsp.beta_d[k];
    u.beta_r = lsp.beta_r[k];
    u.xi_ck = s.a_elem * u.beta_r * lsp.beta_br * s.wbar;
    const double dpb = s.sigma_d_sq + p * u.beta_d;
    u.sigma_e1_sq = p * u.xi_ck * dpb;
    u.sigma_e2_sq = p * u.beta_d * (s.sigma_d_sq + s.sigma_c_sq);
    u.sigma_e3_sq = s.q * dpb;
    u.var_ghat_d = p * u.beta_d * u.beta_d / dpb;
    u.var_gtilde_d = s.sigma_d_sq * u.beta_d / dpb;
    u.coef_direct = 1.0 / (1.0 + s.sigma_d_sq / (p * u.beta_d));
    u.obs_denom = u.var_gtilde_d + u.xi_ck + s.q + s.sigma_c_sq / p;
    u.coef_cascade = u.xi_ck / u.obs_denom;
    u.var_ghat_c = u.xi_ck * u.coef_cascade;
    u.var_gtilde_c = u.xi_ck - u.var_ghat_c;
    const double alt_denom =
        u.sigma_e1_sq + u.sigma_e2_sq + u.sigma_e3_sq + s.sigma_d_sq * s.sigma_c_sq;
    u.var_ghat_c_alt = alt_denom > 0.0 ? u.xi_ck * u.sigma_e1_sq / alt_denom : 0.0;
    u.var_gtilde_c_alt =
        alt_denom > 0.0 ? u.xi_ck * (u.sigma_e2_sq + u.sigma_e3_sq) / alt_denom : 0.0;
    s.ue.push_back(u);
  }
  return s;
}

MatC receive_pilot_direct(const MatC& g_d, const PilotBook& pilots, double p_tau_p,
                          double sigma_d_sq, RngStream& rng) {
  MatC z(g_d.rows(), pilots.tau_p());
  rng.fill_complex_normal(z);
  return std::sqrt(p_tau_p) * g_d * pilots.psi().adjoint() + std::sqrt(sigma_d_sq) * z;
}

VecC despread(const MatC& y, const VecC& pilot_k, double p_tau_p) {
  return (y * pilot_k) / std::sqrt(p_tau_p);
}

VecC mmse_direct(const VecC& y_tilde, double beta_d_k, double sigma_d_sq, double p_tau_p) {
  if (beta_d_k <= 0.0 || p_tau_p <= 0.0)
    throw ConfigError("mmse_direct: beta_d and p_tau_p must be positive");
  return y_tilde / (1.0 + sigma_d_sq / (p_tau_p * beta_d_k));
}

VecC receive_pilot_cascade(const MatC& g_d, const MatC& g_br, const MatC& g_r_ue,
                           const PilotBook& pilots, double p_tau_p, const MatC& emi_n,
                           double sigma_c_sq, const VecC& ghat_d_k, int k, RngStream& rng) {
  if (g_br.cols() != g_r_ue.rows() || (emi_n.size() > 0 && emi_n.rows() != g_br.cols()))
    throw InvalidInput("receive_pilot_cascade: dimension mismatch");
  const double sqrt_p = std::sqrt(p_tau_p);
  MatC z(g_d.rows(), pilots.tau_p());
  rng.fill_complex_normal(z);
  MatC y = sqrt_p * (g_d * pilots.psi().adjoint());
  if (g_br.cols() > 0) {
    MatC ris_rx = g_r_ue * pilots.psi().adjoint();  // through-RIS pilot signal
    if (emi_n.size() > 0) ris_rx += emi_n;          // plus ambient EMI impinging on the RIS
    y += sqrt_p * (g_br * ris_rx);
  }
  y += std::sqrt(sigma_c_sq) * z;
  return despread(y, pilots.column(k), p_tau_p) - ghat_d_k;
}

VecC mmse_cascade(const VecC& y_tilde_c, const UeEstimationStats& stats) {
  return stats.coef_cascade * y_tilde_c;
}

std::pair<double, double> aged_error_variances(const UeEstimationStats& stats,
                                               const AgingProfile& profile, int n) {
  if (n < 0) throw InvalidInput("aged_error_variances: n must be nonnegative");
  const double r0 = profile.rho0(n), r1 = profile.rho1(n);
  return {stats.beta_d - r0 * r0 * stats.var_ghat_d, stats.xi_ck - r1 * r1 * stats.var_ghat_c};
}

void EstimationStats::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "k,xi_ck,q,sigma_e1_sq,sigma_e2_sq,sigma_e3_sq,var_ghat_d,var_ghat_c,"
         "var_ghat_c_alt,var_gtilde_c_alt\n";
  char buf[512];
  for (std::size_t k = 0; k < ue.size(); ++k) {
    const auto& u = ue[k];
    std::snprintf(buf, sizeof(buf),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k + 1, u.xi_ck, q,
                  u.sigma_e1_sq, u.sigma_e2_sq, u.sigma_e3_sq, u.var_ghat_d, u.var_ghat_c,
                  u.var_ghat_c_alt, u.var_gtilde_c_alt);
    out << buf;
  }
}

}  // namespace rissim
