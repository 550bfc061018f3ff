#include "rissim/channel.hpp"

#include <cmath>

namespace rissim {

double jakes_rho(int n, double fd_ts) {
  if (n < 0) throw InvalidInput("jakes_rho: n must be nonnegative");
  if (fd_ts < 0.0) throw InvalidInput("jakes_rho: fd_ts must be nonnegative");
  if (n == 0 || fd_ts == 0.0) return 1.0;
  return std::cyl_bessel_j(0.0, 2.0 * kPi * n * fd_ts);
}

MatC gen_bs_ris(double beta_br, double kappa, const MatR& los_phases, double nlos_variance,
                RngStream& rng) {
  if (beta_br <= 0.0) throw InvalidInput("gen_bs_ris: beta_br must be positive");
  if (kappa < 0.0) throw InvalidInput("gen_bs_ris: kappa must be nonnegative");
  if (nlos_variance < 0.0) throw InvalidInput("gen_bs_ris: nlos_variance must be nonnegative");
  const double los_amp = std::sqrt(beta_br * kappa / (kappa + 1.0));
  const double nlos_amp = std::sqrt(beta_br * nlos_variance / (kappa + 1.0));
  MatC g(los_phases.rows(), los_phases.cols());
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double p = los_phases(r, c);
      g(r, c) = los_amp * cdouble(std::cos(p), std::sin(p)) + nlos_amp * rng.complex_normal();
    }
  return g;
}

VecC gen_ris_ue(double a_elem, double beta_r_k, const CorrelationMatrix& corr, RngStream& rng) {
  return corr.sample(a_elem * beta_r_k, rng);
}

std::pair<MatC, VecC> cascade(const MatC& g_br, const RisPanel& panel, const VecC& g_r_k) {
  if (g_br.cols() != g_r_k.size() || g_br.cols() != panel.m())
    throw InvalidInput("cascade: dimension mismatch");
  MatC per_element = g_br.array().rowwise() * g_r_k.transpose().array();
  VecC effective = per_element * panel.reflection_vector();
  return {std::move(per_element), std::move(effective)};
}

VecC evolve_direct(const VecC& g0, int n, const AgingProfile& profile, double beta_d_k,
                   RngStream& rng) {
  const double r = profile.rho0(n);
  if (n == 0 || r == 1.0) return g0;
  VecC e(g0.size());
  rng.fill_complex_normal(e);
  return r * g0 + (profile.rho_bar0(n) * std::sqrt(beta_d_k)) * e;
}

ChannelRealization generate_block(const SystemConfig& cfg, const LargeScaleParams& lsp,
                                  const CorrelationMatrix* corr, const RisPanel& panel,
                                  const MatR& los_phases, RngStream& rng) {
  const int m = cfg.m();
  if (m > 0 && (corr == nullptr || corr->dim() != m || panel.m() != m))
    throw InvalidInput("generate_block: correlation/panel dimensions must match M");
  ChannelRealization block;
  const double nlos_var =
      cfg.cascade_nlos_weight == CascadeNlosWeight::kArea ? cfg.a_elem : 1.0;
  block.g_br = m > 0 ? gen_bs_ris(lsp.beta_br, lsp.kappa, los_phases, nlos_var, rng)
                     : MatC(cfg.n_t, 0);
  block.g_d.resize(cfg.n_t, cfg.k_ue);
  rng.fill_complex_normal(block.g_d);
  block.g_r.resize(m, cfg.k_ue);
  for (int k = 0; k < cfg.k_ue; ++k) {
    block.g_d.col(k) *= std::sqrt(lsp.beta_d[k]);
    if (m > 0) block.g_r.col(k) = gen_ris_ue(cfg.a_elem, lsp.beta_r[k], *corr, rng);
    auto [per_element, effective] = cascade(block.g_br, panel, block.g_r.col(k));
    block.g_c.push_back(std::move(per_element));
    block.g_c_eff.push_back(std::move(effective));
  }
  return block;
}

VecC evolve_ris_ue(const VecC& g0, int n, const AgingProfile& profile, double a_elem,
                   double beta_r_k, const CorrelationMatrix& corr, RngStream& rng,
                   AgingInnovation innovation) {
  const double r = profile.rho1(n);
  if (n == 0 || r == 1.0) return g0;
  VecC e;
  if (innovation == AgingInnovation::kCorrelated) {
    e = corr.sample(a_elem * beta_r_k, rng);
  } else {
    e.resize(g0.size());
    rng.fill_complex_normal(e);
  }
  return r * g0 + profile.rho_bar1(n) * e;
}

}  // namespace rissim
