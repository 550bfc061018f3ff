#include <doctest.h>

#include <cmath>

#include "rissim/config.hpp"
#include "rissim/geometry.hpp"

using namespace rissim;

TEST_CASE("element positions follow the row-major grid layout") {
  const double dh = 0.03, dv = 0.05;
  const auto pos = ris_element_positions(4, 4, dh, dv);
  REQUIRE(pos.size() == 16);
  // m = 1, 2, 5 in 1-based indexing
  CHECK(pos[0] == Vec3(0, 0, 0));
  CHECK(pos[1] == Vec3(0, dh, 0));
  CHECK(pos[4] == Vec3(0, 0, dv));
}

TEST_CASE("horizontally and vertically adjacent elements are exactly one pitch apart") {
  const double dh = 0.0749, dv = 0.0512;
  const int mh = 5, mv = 3;
  const auto pos = ris_element_positions(mh, mv, dh, dv);
  for (int r = 0; r < mv; ++r)
    for (int c = 0; c + 1 < mh; ++c)
      CHECK((pos[r * mh + c + 1] - pos[r * mh + c]).norm() == dh);
  for (int r = 0; r + 1 < mv; ++r)
    for (int c = 0; c < mh; ++c)
      CHECK((pos[(r + 1) * mh + c] - pos[r * mh + c]).norm() == dv);
}

TEST_CASE("zero grid dimension is rejected") {
  CHECK_THROWS_AS(ris_element_positions(0, 4, 0.1, 0.1), ConfigError);
  CHECK_THROWS_AS(ris_element_positions(4, 0, 0.1, 0.1), ConfigError);
}

TEST_CASE("distance-dependent Rician factor") {
  CHECK(rician_factor(0.0) == doctest::Approx(19.952623149688796).epsilon(1e-12));
  CHECK(rician_factor(100.0) == doctest::Approx(10.0).epsilon(1e-12));
  // BS (-50,0,30) to RIS (0,0,15): distance sqrt(2725)
  CHECK(rician_factor(std::sqrt(2725.0)) == doctest::Approx(13.912186864939110).epsilon(1e-9));
  CHECK_THROWS_AS(rician_factor(-1.0), ConfigError);
}

TEST_CASE("Rician factor strictly decreases with distance") {
  double prev = rician_factor(0.0);
  for (double d = 5.0; d <= 500.0; d += 5.0) {
    const double k = rician_factor(d);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("log-distance path loss") {
  CHECK(path_loss(1.0, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(path_loss(10.0, 2.0, 0.0) == doctest::Approx(0.01).epsilon(1e-15));
  // independently evaluated: 1e-3 * 2725^-1.1
  CHECK(path_loss(std::sqrt(2725.0), 2.2, -30.0) ==
        doctest::Approx(1.6637836138160498e-7).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss(0.0, 2.0, 0.0), ConfigError);
}

TEST_CASE("EMI power and pilot-to-EMI ratio round-trip") {
  SystemConfig cfg = SystemConfig::defaults();
  cfg.rho_db = 20.0;
  cfg.sigma_e_sq.reset();
  cfg.finalize();
  const auto lsp1 = LargeScaleParams::derive(cfg);

  SystemConfig cfg2 = cfg;
  cfg2.sigma_e_sq = lsp1.sigma_e_sq;
  cfg2.rho_db.reset();
  cfg2.finalize();
  const auto lsp2 = LargeScaleParams::derive(cfg2);
  CHECK(lsp2.rho_db == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(lsp2.sigma_e_sq == lsp1.sigma_e_sq);
}

TEST_CASE("carrier wavelength and element area derivations") {
  SystemConfig cfg = SystemConfig::defaults();
  CHECK(cfg.lambda == doctest::Approx(kSpeedOfLight / cfg.f_c).epsilon(1e-12));
  CHECK(cfg.a_elem == cfg.d_h * cfg.d_v);
  CHECK(cfg.d_h == doctest::Approx(cfg.lambda / 2).epsilon(1e-15));
}

TEST_CASE("geometry-derived large-scale parameters at the default scenario") {
  const SystemConfig cfg = SystemConfig::defaults();
  const auto lsp = LargeScaleParams::derive(cfg);
  CHECK(lsp.d_br == doctest::Approx(std::sqrt(2725.0)).epsilon(1e-12));
  CHECK(lsp.kappa == doctest::Approx(13.912186864939110).epsilon(1e-9));
  CHECK(lsp.beta_d.size() == 4);
  CHECK(lsp.beta_r.size() == 4);
  // UEs are ordered by increasing distance from both BS and RIS
  for (int k = 1; k < 4; ++k) {
    CHECK(lsp.beta_d[k] < lsp.beta_d[k - 1]);
    CHECK(lsp.beta_r[k] < lsp.beta_r[k - 1]);
  }
}
