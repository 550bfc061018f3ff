#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rissim/analytics.hpp"
#include "rissim/common.hpp"
#include "rissim/config.hpp"
#include "rissim/correlation.hpp"
#include "rissim/estimation.hpp"
#include "rissim/pilots.hpp"

namespace rissim {

/// Options for a simulation run.
struct McOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  int workers = 0;                ///< 0 = hardware concurrency
  std::vector<int> symbols;       ///< symbol indices to evaluate; empty = {1,10,50,tau_d}
  double tolerance = 0.05;        ///< relative gap gate for compare()
};

/// Raw coefficient samples of one coherence-block trial, indexed
/// [symbol_index * K + k] unless noted. Signal/interference coefficients are
/// stored without the precoder normalization so both the per-realization and
/// the deterministic normalization can be applied downstream.
struct TrialOutcome {
  std::int64_t trial = 0;
  std::vector<cdouble> sig;    ///< t_k[n]^H Gbar_k[n]^H (unnormalized)
  std::vector<double> intf;    ///< sum_{j != k} |t_k[n]^H Gbar_j[n]^H|^2
  std::vector<double> emi;     ///< |g_{r,k}[n]^H Phi^H u[n]|^2
  std::vector<double> zeta_sq; ///< per-realization normalization, per symbol
};

/// Streaming sums over trials for one (k, n) cell.
struct TermAccumulator {
  // deterministic-normalization signal coefficient
  double s_re = 0, s_im = 0, s_abs2 = 0, s_abs4 = 0;
  double s_abs2re = 0, s_abs2im = 0, s_re2 = 0, s_im2 = 0, s_reim = 0;
  // per-realization-normalization signal coefficient
  double sl_re = 0, sl_im = 0, sl_abs2 = 0;
  // interference power sums
  double x = 0, x2 = 0, xl = 0;
  // EMI power sums
  double e = 0, e2 = 0;
  void add(const TermAccumulator& o);
};

struct McAccumulator {
  std::int64_t trials = 0;
  int k_ue = 0;
  std::vector<int> symbols;
  std::vector<TermAccumulator> cells;  ///< symbols.size() * k_ue
  std::vector<double> zeta2_sum;       ///< per symbol
  std::vector<double> zeta2_sq_sum;
  std::vector<double> tr_sum;          ///< per-realization precoder trace sums
  std::vector<double> zeta2_det;       ///< deterministic normalization per symbol

  TermAccumulator& cell(int sym_idx, int k) { return cells[sym_idx * k_ue + k]; }
  const TermAccumulator& cell(int sym_idx, int k) const { return cells[sym_idx * k_ue + k]; }
  void add(const McAccumulator& o);
};

/// Point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// Empirical SINR terms for one (k, n) cell.
struct EmpiricalCell {
  int k = 0;
  int n = 0;
  Estimate i0, i1, i2, i3;
  double i0_literal = 0.0;  ///< per-realization-normalization variants
  double i1_literal = 0.0;
  double i2_literal = 0.0;
  double zeta_ratio = 1.0;   ///< E[per-realization zeta^2] / deterministic zeta^2
  double trace_mean = 0.0;   ///< E[tr(Gbar Gbar^H)]
};

struct EmpiricalTerms {
  std::int64_t trials = 0;
  std::vector<int> symbols;
  std::vector<EmpiricalCell> cells;
};

/// Shared immutable state for trial simulation.
class McContext {
 public:
  McContext(const SystemConfig& cfg, std::uint64_t seed);

  const SystemConfig& config() const { return cfg_; }
  const LargeScaleParams& large_scale() const { return lsp_; }
  const EstimationStats& stats() const { return stats_; }
  const CorrelationMatrix* correlation() const { return m_ > 0 ? &corr_ : nullptr; }
  std::uint64_t seed() const { return seed_; }

  /// Simulates one coherence block and records coefficient samples at the
  /// given symbols.
  TrialOutcome run_trial(std::int64_t trial, const std::vector<int>& symbols) const;

 private:
  SystemConfig cfg_;
  LargeScaleParams lsp_;
  EstimationStats stats_;
  CorrelationMatrix corr_;
  PilotBook pilots_;
  MatR fixed_los_;  // used when los_phase_mode == kFixed
  int m_ = 0;
  std::uint64_t seed_ = 0;
};

/// Convenience single-trial entry point.
TrialOutcome run_trial(const SystemConfig& cfg, std::uint64_t seed, std::int64_t trial,
                       const std::vector<int>& symbols);

/// Multi-threaded streaming run. Results are bit-identical for any worker
/// count: trials are accumulated in fixed-size blocks and blocks are reduced
/// in index order.
McAccumulator run_blocks(const McContext& ctx, const McOptions& opts);

/// Reduces recorded outcomes into empirical term estimates. Requires at
/// least two trials. `zeta2_det` holds the deterministic normalization per
/// symbol (from zeta_sq_deterministic).
EmpiricalTerms empirical_terms(const std::vector<TrialOutcome>& outcomes,
                               const std::vector<int>& symbols, int k_ue,
                               const std::vector<double>& zeta2_det);

EmpiricalTerms empirical_terms(const McAccumulator& acc);

/// One row of the closed-form vs simulation comparison.
struct TermComparison {
  int k = 0;
  int n = 0;
  int term = 0;  ///< 0..3
  double analytic = 0.0;
  double empirical = 0.0;
  double std_err = 0.0;
  double rel_gap = 0.0;
  bool pass = false;
  double empirical_literal = 0.0;
  double zeta_ratio = 1.0;
};

struct ComparisonReport {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  double tolerance = 0.05;
  std::vector<TermComparison> rows;
  bool all_pass() const;
  std::string to_csv() const;
};

/// Compares one analytic breakdown against the matching empirical cell.
/// Throws InvalidInput if (k, n) do not match.
std::vector<TermComparison> compare(const SinrBreakdown& analytic, const EmpiricalCell& empirical,
                                    double tolerance);

/// Full validation: runs the simulator and compares every (k, n, term).
ComparisonReport validate(const SystemConfig& cfg, const McOptions& opts);

}  // namespace rissim
