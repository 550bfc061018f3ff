#include <doctest.h>

#include <cmath>
#include <complex>

#include "rissim/channel.hpp"
#include "rissim/geometry.hpp"

using namespace rissim;

namespace {

// power-series reference for the zeroth-order Bessel function,
// J0(x) = sum_k (-1)^k (x/2)^{2k} / (k!)^2, truncated below 1e-16
double j0_series(double x) {
  const double q = x * x / 4.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (k * static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return sum;
}

CorrelationMatrix default_corr(int side, double spacing_frac = 0.5, double lambda = 0.15) {
  return build_correlation(
      ris_element_positions(side, side, lambda * spacing_frac, lambda * spacing_frac), lambda);
}

}  // namespace

TEST_CASE("temporal correlation coefficient") {
  CHECK(jakes_rho(0, 0.01) == 1.0);
  CHECK(jakes_rho(57, 0.0) == 1.0);
  CHECK(jakes_rho(100, 0.001) == doctest::Approx(0.90371264209246631).epsilon(1e-10));
  for (const double x : {0.05, 0.3, 1.0, 2.4, 5.0, 9.7}) {
    const int n = 100;
    const double fd = x / (2.0 * kPi * n);
    CHECK(std::abs(jakes_rho(n, fd) - j0_series(x)) < 1e-10);
  }
  CHECK_THROWS_AS(jakes_rho(-1, 0.001), InvalidInput);
  CHECK_THROWS_AS(jakes_rho(1, -0.001), InvalidInput);
}

TEST_CASE("aging profile basics") {
  AgingProfile p{0.002};
  CHECK(p.rho0(0) == 1.0);
  CHECK(p.rho1(0) == 1.0);
  CHECK(p.rho0(40) == p.rho1(40));  // one temporal law for both links
  const double r = p.rho0(40);
  CHECK(p.rho_bar0(40) == doctest::Approx(std::sqrt(1 - r * r)).epsilon(1e-14));
  for (int n : {1, 10, 100}) CHECK(std::abs(p.rho0(n)) <= 1.0);
}

TEST_CASE("RIS panel invariants") {
  RngStream rng(5);
  const RisPanel panel = RisPanel::random(16, rng);
  for (int i = 0; i < 16; ++i)
    CHECK(std::abs(panel.reflection_vector()(i)) == doctest::Approx(1.0).epsilon(1e-12));
  const MatC phi = panel.reflection_matrix();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (i != j) CHECK(phi(i, j) == cdouble(0, 0));
  VecC bad(2);
  bad << cdouble(0.5, 0), cdouble(1, 0);
  CHECK_THROWS_AS(RisPanel{bad}, InvalidInput);
}

TEST_CASE("BS-RIS channel in the pure LoS limit") {
  RngStream rng(9);
  const double beta = 0.37;
  MatR phases(8, 4);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 8; ++r) phases(r, c) = rng.uniform_phase();
  const MatC g = gen_bs_ris(beta, 1e12, phases, 1.0, rng);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 8; ++r)
      CHECK(std::abs(g(r, c)) == doctest::Approx(std::sqrt(beta)).epsilon(1e-5));
}

TEST_CASE("BS-RIS channel NLoS variance in both weight conventions") {
  RngStream rng(10);
  const double beta = 0.37;
  const MatR phases = MatR::Zero(16, 16);
  const int reps = 400;  // 400 * 256 entries
  for (const double nlos_var : {1.0, 0.25}) {
    double acc = 0.0;
    for (int t = 0; t < reps; ++t) {
      const MatC g = gen_bs_ris(beta, 0.0, phases, nlos_var, rng);
      acc += g.squaredNorm();
    }
    const double var = acc / (reps * 256.0);
    CHECK(var == doctest::Approx(beta * nlos_var).epsilon(0.02));
  }
  CHECK_THROWS_AS(gen_bs_ris(beta, -0.5, phases, 1.0, rng), InvalidInput);
}

TEST_CASE("BS-RIS channel first and second moments at kappa = 1") {
  RngStream rng(12);
  const double beta = 2.0, kappa = 1.0;
  MatR phases(8, 8);
  for (int c = 0; c < 8; ++c)
    for (int r = 0; r < 8; ++r) phases(r, c) = rng.uniform_phase();
  const int reps = 3000;
  MatC mean = MatC::Zero(8, 8);
  double fluct = 0.0;
  std::vector<MatC> draws;
  draws.reserve(reps);
  for (int t = 0; t < reps; ++t) {
    draws.push_back(gen_bs_ris(beta, kappa, phases, 1.0, rng));
    mean += draws.back();
  }
  mean /= double(reps);
  for (const auto& d : draws) fluct += (d - mean).squaredNorm();
  fluct /= reps * 64.0;
  // mean -> sqrt(beta/2) e^{j theta}, fluctuation variance -> beta/2
  for (int c = 0; c < 8; ++c)
    for (int r = 0; r < 8; ++r) {
      const cdouble expect =
          std::sqrt(beta / 2.0) * cdouble(std::cos(phases(r, c)), std::sin(phases(r, c)));
      CHECK(std::abs(mean(r, c) - expect) < 0.05 * std::sqrt(beta / 2.0));
    }
  CHECK(fluct == doctest::Approx(beta / 2.0).epsilon(0.02));
}

TEST_CASE("RIS-UE channel delegates to correlated sampling") {
  const auto corr = default_corr(2);
  RngStream rng(3);
  CHECK(gen_ris_ue(0.0, 1.0, corr, rng).norm() == 0.0);
  // scalar case: variance a_elem * beta_r
  const auto corr1 = build_correlation({Vec3(0, 0, 0)}, 0.15);
  const double a = 0.3, br = 0.7;
  double acc = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) acc += std::norm(gen_ris_ue(a, br, corr1, rng)(0));
  CHECK(acc / n == doctest::Approx(a * br).epsilon(0.02));
}

TEST_CASE("cascade equals the direct reflected product") {
  RngStream rng(21);
  const int nt = 6, m = 8;
  MatR phases(nt, m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < nt; ++r) phases(r, c) = rng.uniform_phase();
  const MatC g_br = gen_bs_ris(0.8, 3.0, phases, 1.0, rng);
  const RisPanel panel = RisPanel::random(m, rng);
  VecC g_r(m);
  rng.fill_complex_normal(g_r);

  const auto [per_element, effective] = cascade(g_br, panel, g_r);
  REQUIRE(per_element.rows() == nt);
  REQUIRE(per_element.cols() == m);
  // brute-force reference: G Phi g with explicit loops
  VecC ref = VecC::Zero(nt);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < m; ++j)
      ref(i) += g_br(i, j) * panel.reflection_vector()(j) * g_r(j);
  CHECK((effective - ref).norm() <= 1e-10 * ref.norm());
  for (int j = 0; j < m; ++j)
    CHECK((per_element.col(j) - g_br.col(j) * g_r(j)).norm() == 0.0);
}

TEST_CASE("cascade trivial shapes and bilinearity") {
  RngStream rng(22);
  // M = 0: empty matrix and zero effective vector
  const MatC g0(4, 0);
  const auto [pe0, eff0] = cascade(g0, RisPanel(VecC(0)), VecC(0));
  CHECK(pe0.cols() == 0);
  CHECK(eff0.size() == 4);
  CHECK(eff0.norm() == 0.0);

  // M = 1 with zero phase: product of the two scalars
  MatC g1(3, 1);
  rng.fill_complex_normal(g1);
  VecC v1(1);
  v1 << cdouble(1, 0);
  VecC gr1(1);
  gr1 << cdouble(0.3, -0.4);
  const auto [pe1, eff1] = cascade(g1, RisPanel(v1), gr1);
  for (int i = 0; i < 3; ++i) CHECK(eff1(i) == g1(i, 0) * gr1(0));

  // scaling by a power of two scales the effective vector exactly
  MatC g(4, 5);
  rng.fill_complex_normal(g);
  const RisPanel panel = RisPanel::random(5, rng);
  VecC gr(5);
  rng.fill_complex_normal(gr);
  const auto [pe_a, eff_a] = cascade(g, panel, gr);
  const auto [pe_b, eff_b] = cascade(g, panel, VecC(2.0 * gr));
  for (int i = 0; i < 4; ++i) CHECK(eff_b(i) == 2.0 * eff_a(i));

  CHECK_THROWS_AS(cascade(g, panel, gr1), InvalidInput);
}

TEST_CASE("direct-link aging identities and stationarity") {
  RngStream rng(31);
  VecC g0(16);
  rng.fill_complex_normal(g0);
  const AgingProfile prof{0.002};
  CHECK((evolve_direct(g0, 0, prof, 1.0, rng) - g0).norm() == 0.0);
  const AgingProfile frozen{0.0};
  CHECK((evolve_direct(g0, 250, frozen, 1.0, rng) - g0).norm() == 0.0);

  // marginal variance is preserved at any symbol
  const double beta = 0.6;
  const int n_draws = 50000, n = 37;
  double acc = 0.0;
  cdouble lag = 0.0;
  for (int t = 0; t < n_draws; ++t) {
    VecC a(4);
    rng.fill_complex_normal(a);
    a *= std::sqrt(beta);
    const VecC b = evolve_direct(a, n, prof, beta, rng);
    acc += b.squaredNorm();
    lag += b.dot(a);  // E[g_n^* g_0] per entry
  }
  CHECK(acc / (n_draws * 4.0) == doctest::Approx(beta).epsilon(0.02));
  CHECK(std::abs(std::abs(lag) / (n_draws * 4.0 * beta) - prof.rho0(n)) < 0.01);
}

TEST_CASE("RIS-side aging keeps the spatial covariance stationary") {
  const double lambda = 0.15;
  const auto corr = default_corr(4, 0.5, lambda);  // M = 16
  const int m = corr.dim();
  RngStream rng(33);
  const AgingProfile prof{0.002};
  VecC g0(m);

  // identities
  rng.fill_complex_normal(g0);
  CHECK((evolve_ris_ue(g0, 0, prof, 1.0, 1.0, corr, rng) - g0).norm() == 0.0);
  CHECK((evolve_ris_ue(g0, 9, AgingProfile{0.0}, 1.0, 1.0, corr, rng) - g0).norm() == 0.0);

  // covariance preservation at n = 50, unit scale (a_elem = beta_r = 1)
  const int n_draws = 400000, n = 50;
  MatC cov = MatC::Zero(m, m);
  VecC w(m);
  for (int t = 0; t < n_draws; ++t) {
    corr.sample_into(1.0, rng, w, g0);
    const VecC gn = evolve_ris_ue(g0, n, prof, 1.0, 1.0, corr, rng);
    cov.noalias() += gn * gn.adjoint();
  }
  cov /= double(n_draws);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      CHECK(std::abs(cov(i, j) - corr.entries()(i, j)) < 0.01);
}

TEST_CASE("block generation keeps the cascade representations consistent") {
  SystemConfig cfg = SystemConfig::defaults();
  cfg.apply_set("m_h=4");
  cfg.apply_set("m_v=4");
  cfg.finalize();
  const auto lsp = LargeScaleParams::derive(cfg);
  const auto corr = build_correlation(
      ris_element_positions(cfg.m_h, cfg.m_v, cfg.d_h, cfg.d_v), cfg.lambda);
  RngStream rng(55);
  MatR phases(cfg.n_t, cfg.m());
  double gd_power = 0.0;
  const int reps = 800;  // 800 * 16 * 4 direct entries
  for (int t = 0; t < reps; ++t) {
    for (int c = 0; c < cfg.m(); ++c)
      for (int r = 0; r < cfg.n_t; ++r) phases(r, c) = rng.uniform_phase();
    const RisPanel panel = RisPanel::random(cfg.m(), rng);
    const ChannelRealization block = generate_block(cfg, lsp, &corr, panel, phases, rng);
    // matrix-times-reflection equals the direct triple product
    for (int k = 0; k < cfg.k_ue; ++k) {
      const VecC direct = block.g_br * panel.reflection_matrix() * block.g_r.col(k);
      CHECK((block.g_c_eff[k] - direct).norm() <= 1e-10 * direct.norm());
      CHECK((block.g_c[k] * panel.reflection_vector() - block.g_c_eff[k]).norm() == 0.0);
    }
    gd_power += block.g_d.col(0).squaredNorm();
  }
  CHECK(gd_power / (reps * cfg.n_t) == doctest::Approx(lsp.beta_d[0]).epsilon(0.02));
}

TEST_CASE("unit-variance innovation mode replaces the correlated draw") {
  const auto corr = build_correlation(
      ris_element_positions(3, 3, 0.075 / 2, 0.075 / 2), 0.15);  // strongly correlated
  RngStream rng(56);
  const AgingProfile prof{0.002};
  const int n = 40, n_draws = 40000;
  const double r2 = prof.rho1(n) * prof.rho1(n);
  double var_unit = 0.0;
  VecC g0(corr.dim()), scratch(corr.dim());
  for (int t = 0; t < n_draws; ++t) {
    corr.sample_into(1.0, rng, scratch, g0);
    var_unit += evolve_ris_ue(g0, n, prof, 1.0, 1.0, corr, rng, AgingInnovation::kIidUnit)
                    .squaredNorm();
  }
  // per-element marginals stay unit (rho^2 * 1 + (1 - rho^2) * 1) even
  // though the innovation ignores the spatial correlation
  CHECK(var_unit / (n_draws * corr.dim()) == doctest::Approx(1.0).epsilon(0.02));
  (void)r2;
}

TEST_CASE("temporal correlation of the evolved channel matches the aging law") {
  const auto corr1 = build_correlation({Vec3(0, 0, 0)}, 0.15);
  RngStream rng(35);
  const AgingProfile prof{0.001};
  for (const int n : {1, 10, 50, 100}) {
    cdouble lag = 0.0;
    const int n_draws = 100000;
    for (int t = 0; t < n_draws; ++t) {
      const VecC g0 = corr1.sample(1.0, rng);
      const VecC gn = evolve_ris_ue(g0, n, prof, 1.0, 1.0, corr1, rng);
      lag += gn.dot(g0);
    }
    CHECK(std::abs(std::abs(lag) / n_draws - prof.rho1(n)) < 0.01);
  }
}
