#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rissim/common.hpp"

namespace rissim {

/// How the NLoS part of the BS-RIS channel is weighted inside the cascaded
/// channel statistics. `kArea` uses the element area A (and generates the
/// NLoS fading with per-entry variance A) so generator and closed forms
/// describe the same model; `kUnit` uses weight 1 with unit-variance fading.
enum class CascadeNlosWeight { kArea, kUnit };

/// Cross-user factor inside the interference term: `kSymmetric` uses UE j's
/// own cascaded estimate variance; `kServing` reuses the served UE's xi
/// inside UE j's factor (the alternative reading, kept for comparison).
enum class I2CrossWeight { kSymmetric, kServing };

/// Closed-form family used by the analytic evaluator.
///  kExact       - full second/fourth-moment evaluation including the terms
///                 induced by the shared BS-RIS channel and the estimator
///                 corruption (matches the simulator at O(MC noise)).
///  kIidGaussian - treats estimate/error rows as i.i.d. Gaussian vectors
///                 (keeps beamforming-fluctuation and leakage terms, drops
///                 the shared-channel corrections).
///  kSimplified  - signal/interference variances with the fluctuation and
///                 leakage contributions dropped entirely.
enum class TermModel { kExact, kIidGaussian, kSimplified };

/// LoS phase handling for the BS-RIS channel: fresh per coherence block,
/// frozen once per experiment, or all-zero.
enum class LosPhaseMode { kPerTrial, kFixed, kZero };

/// Innovation statistics for the RIS-UE aging model: `kCorrelated` draws the
/// innovation with the same spatial covariance as the initial state (keeps
/// the process stationary), `kIidUnit` draws unit-variance i.i.d. entries.
enum class AgingInnovation { kCorrelated, kIidUnit };

/// Full scenario description. All powers in watt, lengths in meters,
/// frequencies in Hz. Construct via defaults() / from_file() / apply_set(),
/// then call finalize() to derive dependent quantities and validate.
struct SystemConfig {
  // array and user geometry
  int n_t = 16;   ///< BS antenna count
  int m_h = 8;    ///< RIS elements per row
  int m_v = 8;    ///< RIS elements per column
  int k_ue = 4;   ///< number of UEs
  Vec3 bs_pos{-50.0, 0.0, 30.0};
  Vec3 ris_pos{0.0, 0.0, 15.0};
  std::vector<Vec3> ue_pos;  ///< default set in defaults()

  // carrier / element dimensions
  double f_c = 2e9;
  double lambda = kSpeedOfLight / 2e9;  ///< derived, c / f_c
  double d_h = 0.0;                     ///< 0 means "use lambda/2"
  double d_v = 0.0;
  double a_elem = 0.0;  ///< derived, d_h * d_v

  // powers and noise
  double p_tau_u = dbm_to_watt(25.0);  ///< per-UE pilot symbol power
  int tau_p = 4;                       ///< pilot sequence length
  double p_tau_p = 0.0;                ///< derived, tau_p * p_tau_u
  double p_t = 1.0;                    ///< total downlink power budget
  double sigma_d_sq = dbm_to_watt(-96.0);
  double sigma_c_sq = dbm_to_watt(-96.0);
  double sigma_k_sq = dbm_to_watt(-96.0);

  // EMI power: exactly one of {sigma_e_sq, rho_db} is authoritative
  std::optional<double> sigma_e_sq;  ///< EMI power at the RIS
  std::optional<double> rho_db;      ///< pilot-to-EMI power ratio in dB

  // time structure
  int tau_c = 100;
  int tau_u = 4;
  double fd_ts = 0.001;                   ///< normalized Doppler f_D * T_s
  std::optional<double> ue_speed_mps;     ///< alternative to fd_ts ...
  std::optional<double> symbol_time_s;    ///< ... via f_D = f_c * v / c

  // path-loss model (see README for the link-budget rationale)
  double path_loss_exponent_direct = 3.6;
  double path_loss_exponent_ris = 2.0;
  double path_loss_ref_db = -18.0;
  double direct_blockage_db = 42.0;  ///< extra attenuation on the direct path

  std::optional<double> kappa_override;  ///< replaces the distance-derived value

  // model switches
  CascadeNlosWeight cascade_nlos_weight = CascadeNlosWeight::kArea;
  I2CrossWeight i2_cross_weight = I2CrossWeight::kSymmetric;
  TermModel term_model = TermModel::kExact;
  LosPhaseMode los_phase_mode = LosPhaseMode::kPerTrial;
  AgingInnovation aging_innovation = AgingInnovation::kCorrelated;

  int m() const { return m_h * m_v; }
  int tau_d() const { return tau_c - tau_u; }

  /// Derives lambda, element sizes, pilot power, EMI power and validates all
  /// invariants. Throws ConfigError on violation.
  void finalize();

  /// Canonical key=value serialization of the fully resolved config.
  std::string canonical_string() const;

  /// FNV-1a hash of canonical_string(), echoed into every CSV row.
  std::uint64_t hash() const;

  static SystemConfig defaults();
  static SystemConfig from_file(const std::string& path);

  /// Applies a single "key=value" override (the --set syntax).
  void apply_set(const std::string& key_value);
  void apply_key(const std::string& key, const std::string& value);
};

/// Large-scale quantities derived from the geometry.
struct LargeScaleParams {
  double d_br = 0.0;              ///< BS-RIS distance
  double beta_br = 0.0;           ///< BS-RIS path loss, linear
  std::vector<double> beta_d;     ///< per-UE direct path loss
  std::vector<double> beta_r;     ///< per-UE RIS-UE path loss
  double kappa = 0.0;             ///< Rician factor, linear
  double sigma_e_sq = 0.0;        ///< resolved EMI power
  double rho_db = 0.0;            ///< resolved pilot-to-EMI ratio

  static LargeScaleParams derive(const SystemConfig& cfg);
};

}  // namespace rissim
