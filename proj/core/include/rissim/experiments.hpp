#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rissim/analytics.hpp"
#include "rissim/common.hpp"
#include "rissim/config.hpp"
#include "rissim/montecarlo.hpp"

namespace rissim {

enum class SweepAxis { kM, kKappaOverride, kFdTs, kRhoDb, kTauC, kAElemScale, kSymbolIndex };
enum class SweepMode { kAnalytic, kMonteCarlo, kBoth };

SweepAxis parse_axis(const std::string& name);
SweepMode parse_mode(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kM;
  std::vector<double> values;
  SystemConfig scenario;
  SweepMode mode = SweepMode::kAnalytic;
  std::string output_path;
  std::uint64_t seed = 1;
  std::int64_t trials = 2000;
  int workers = 0;
  int mc_symbol_stride = 8;  ///< symbol decimation for simulated SE curves

  static SweepSpec from_file(const std::string& path, SystemConfig scenario);
};

struct SweepRow {
  double axis_value = 0.0;
  int ue = -1;  ///< 0-based UE index; -1 = sum over UEs
  double se_analytic = 0.0;
  double se_mc = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::uint64_t config_hash = 0;
  std::string axis_name;
  std::vector<SweepRow> rows;
  std::string to_csv() const;
};

SweepResult sweep(const SweepSpec& spec);

/// Per-UE analytic spectral efficiencies for one scenario.
std::vector<double> analytic_se_per_ue(const SystemConfig& cfg);

/// Per-UE simulated spectral efficiencies (deterministic given seed). The
/// per-symbol SINR is estimated on a decimated symbol grid and interpolated.
std::vector<double> mc_se_per_ue(const SystemConfig& cfg, std::uint64_t seed, std::int64_t trials,
                                 int workers, int symbol_stride);

struct TrendCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct TrendReport {
  std::vector<TrendCheck> checks;
  std::vector<std::string> emitted;  ///< report-only quantities with reference anchors
  bool all_pass() const;
  std::string to_text() const;
};

/// Element-count study: sum SE on an M grid for the four (EMI, aging)
/// combinations plus a Rician-factor sweep at the base M.
struct Fig1Data {
  std::vector<double> m_values;
  std::vector<double> se_emi_aging;
  std::vector<double> se_noemi_aging;
  std::vector<double> se_emi_static;
  std::vector<double> se_noemi_static;
  std::vector<double> kappa_values;
  std::vector<double> se_kappa;
  std::vector<double> se_mc_emi_aging;  ///< optional simulation overlay
};

Fig1Data run_fig1(const SystemConfig& cfg, SweepMode mode, std::uint64_t seed,
                  std::int64_t trials, int workers);
TrendReport figure1_trend_check(const Fig1Data& d);
std::string fig1_csv(const SystemConfig& cfg, const Fig1Data& d);

/// Per-symbol SE decay versus time for two Doppler values and two EMI powers.
struct Fig2Data {
  std::vector<int> n_values;
  std::vector<double> fd_values;      ///< e.g. {0.001, 0.002}
  std::vector<double> emi_boost_db;   ///< e.g. {0, 20}
  /// indexed [fd][emi][n]
  std::vector<std::vector<std::vector<double>>> avg_se;
  int tau_d = 0;
  std::vector<int> mc_n_values;  ///< decimated grid for the simulation overlay
  std::vector<std::vector<std::vector<double>>> avg_se_mc;  ///< indexed [fd][emi][i]
};

Fig2Data run_fig2(const SystemConfig& cfg, SweepMode mode, std::uint64_t seed,
                  std::int64_t trials, int workers);
TrendReport figure2_trend_check(const Fig2Data& d);
std::string fig2_csv(const SystemConfig& cfg, const Fig2Data& d);

/// Sum SE versus normalized Doppler for two element areas and block lengths.
struct Fig3Data {
  std::vector<double> fd_values;
  std::vector<double> area_scales;  ///< e.g. {1, 4}
  std::vector<int> tau_cs;          ///< e.g. {100, 200}
  /// indexed [area][tau_c][fd]
  std::vector<std::vector<std::vector<double>>> sum_se;
  std::vector<std::vector<std::vector<double>>> sum_se_mc;  ///< simulation overlay
};

Fig3Data run_fig3(const SystemConfig& cfg, SweepMode mode, std::uint64_t seed,
                  std::int64_t trials, int workers);
TrendReport figure3_trend_check(const Fig3Data& d);
std::string fig3_csv(const SystemConfig& cfg, const Fig3Data& d);

/// Writes per-(UE, symbol) SINR decompositions for the scenario as CSV.
std::string breakdown_csv(const SystemConfig& cfg);

}  // namespace rissim
