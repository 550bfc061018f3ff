#include "rissim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rissim/geometry.hpp"

namespace rissim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  const int i = static_cast<int>(std::llround(x));
  if (std::abs(x - i) > 1e-9) throw ConfigError("expected integer for '" + key + "': " + v);
  return i;
}

Vec3 parse_vec3(const std::string& key, const std::string& v) {
  std::stringstream ss(v);
  std::string part;
  std::vector<double> xs;
  while (std::getline(ss, part, ',')) xs.push_back(parse_double(key, trim(part)));
  if (xs.size() != 3) throw ConfigError("expected 'x,y,z' for '" + key + "': " + v);
  return Vec3(xs[0], xs[1], xs[2]);
}

std::vector<Vec3> parse_vec3_list(const std::string& key, const std::string& v) {
  std::stringstream ss(v);
  std::string part;
  std::vector<Vec3> out;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (!part.empty()) out.push_back(parse_vec3(key, part));
  }
  if (out.empty()) throw ConfigError("expected at least one 'x,y,z' entry for '" + key + "'");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

SystemConfig SystemConfig::defaults() {
  SystemConfig cfg;
  cfg.ue_pos = {Vec3(50.0, 0.0, 1.7), Vec3(50.5, 0.0, 1.7), Vec3(51.0, 0.0, 1.7),
                Vec3(51.5, 0.0, 1.7)};
  cfg.finalize();
  return cfg;
}

void SystemConfig::finalize() {
  if (n_t < 1) throw ConfigError("n_t must be >= 1");
  if (m_h < 0 || m_v < 0) throw ConfigError("m_h, m_v must be >= 0");
  if ((m_h == 0) != (m_v == 0)) throw ConfigError("m_h and m_v must both be zero or both positive");
  if (k_ue < 1) throw ConfigError("k_ue must be >= 1");
  if (f_c <= 0.0) throw ConfigError("f_c must be positive");
  lambda = kSpeedOfLight / f_c;
  if (d_h <= 0.0) d_h = lambda / 2.0;
  if (d_v <= 0.0) d_v = lambda / 2.0;
  a_elem = d_h * d_v;

  if (static_cast<int>(ue_pos.size()) != k_ue) {
    if (ue_pos.empty()) throw ConfigError("ue_pos must provide k_ue positions");
    throw ConfigError("ue_pos has " + std::to_string(ue_pos.size()) + " entries, expected k_ue=" +
                      std::to_string(k_ue));
  }

  if (tau_p < k_ue) throw ConfigError("tau_p must be >= k_ue (orthogonal pilots)");
  if (tau_u < tau_p) throw ConfigError("tau_u must be >= tau_p");
  if (tau_c <= tau_u) throw ConfigError("tau_c must be > tau_u");

  if (p_tau_u <= 0.0) throw ConfigError("p_tau_u must be positive");
  p_tau_p = tau_p * p_tau_u;
  if (p_t <= 0.0) throw ConfigError("p_t must be positive");
  // zero is allowed for degenerate (noise-free) studies
  if (sigma_d_sq < 0.0 || sigma_c_sq < 0.0 || sigma_k_sq < 0.0)
    throw ConfigError("noise variances must be nonnegative");

  if (sigma_e_sq && rho_db)
    throw ConfigError("exactly one of sigma_e_sq / rho_db may be set");
  if (!sigma_e_sq && !rho_db) rho_db = 20.0;
  if (sigma_e_sq && *sigma_e_sq < 0.0) throw ConfigError("sigma_e_sq must be nonnegative");

  if (ue_speed_mps || symbol_time_s) {
    if (!(ue_speed_mps && symbol_time_s))
      throw ConfigError("ue_speed_mps and symbol_time_s must be set together");
    fd_ts = f_c * (*ue_speed_mps) / kSpeedOfLight * (*symbol_time_s);
  }
  if (fd_ts < 0.0) throw ConfigError("fd_ts must be nonnegative");
  if (kappa_override && *kappa_override < 0.0) throw ConfigError("kappa_override must be >= 0");
}

LargeScaleParams LargeScaleParams::derive(const SystemConfig& cfg) {
  LargeScaleParams p;
  p.d_br = (cfg.bs_pos - cfg.ris_pos).norm();
  if (p.d_br <= 0.0) throw ConfigError("BS and RIS positions coincide");
  p.beta_br = path_loss(p.d_br, cfg.path_loss_exponent_ris, cfg.path_loss_ref_db);
  p.kappa = cfg.kappa_override ? *cfg.kappa_override : rician_factor(p.d_br);
  const double direct_ref = cfg.path_loss_ref_db - cfg.direct_blockage_db;
  for (const auto& ue : cfg.ue_pos) {
    p.beta_d.push_back(path_loss((cfg.bs_pos - ue).norm(), cfg.path_loss_exponent_direct, direct_ref));
    p.beta_r.push_back(path_loss((cfg.ris_pos - ue).norm(), cfg.path_loss_exponent_ris,
                                 cfg.path_loss_ref_db));
  }
  if (cfg.sigma_e_sq) {
    p.sigma_e_sq = *cfg.sigma_e_sq;
    p.rho_db = linear_to_db(cfg.p_tau_p * p.beta_br / p.sigma_e_sq);
  } else {
    p.rho_db = *cfg.rho_db;
    p.sigma_e_sq = cfg.p_tau_p * p.beta_br / db_to_linear(p.rho_db);
  }
  return p;
}

void SystemConfig::apply_key(const std::string& key, const std::string& value) {
  if (key == "n_t") n_t = parse_int(key, value);
  else if (key == "m_h") m_h = parse_int(key, value);
  else if (key == "m_v") m_v = parse_int(key, value);
  else if (key == "k_ue") k_ue = parse_int(key, value);
  else if (key == "f_c") f_c = parse_double(key, value);
  else if (key == "d_h") d_h = parse_double(key, value);
  else if (key == "d_v") d_v = parse_double(key, value);
  else if (key == "bs_pos") bs_pos = parse_vec3(key, value);
  else if (key == "ris_pos") ris_pos = parse_vec3(key, value);
  else if (key == "ue_pos") { ue_pos = parse_vec3_list(key, value); k_ue = static_cast<int>(ue_pos.size()); }
  else if (key == "p_tau_u") p_tau_u = parse_double(key, value);
  else if (key == "p_tau_u_dbm") p_tau_u = dbm_to_watt(parse_double(key, value));
  else if (key == "tau_p") tau_p = parse_int(key, value);
  else if (key == "tau_u") tau_u = parse_int(key, value);
  else if (key == "tau_c") tau_c = parse_int(key, value);
  else if (key == "p_t") p_t = parse_double(key, value);
  else if (key == "p_t_dbm") p_t = dbm_to_watt(parse_double(key, value));
  else if (key == "sigma_d_sq") sigma_d_sq = parse_double(key, value);
  else if (key == "sigma_d_dbm") sigma_d_sq = dbm_to_watt(parse_double(key, value));
  else if (key == "sigma_c_sq") sigma_c_sq = parse_double(key, value);
  else if (key == "sigma_c_dbm") sigma_c_sq = dbm_to_watt(parse_double(key, value));
  else if (key == "sigma_k_sq") sigma_k_sq = parse_double(key, value);
  else if (key == "sigma_k_dbm") sigma_k_sq = dbm_to_watt(parse_double(key, value));
  else if (key == "sigma_e_sq") { sigma_e_sq = parse_double(key, value); rho_db.reset(); }
  else if (key == "sigma_e_dbm") { sigma_e_sq = dbm_to_watt(parse_double(key, value)); rho_db.reset(); }
  else if (key == "rho_db") { rho_db = parse_double(key, value); sigma_e_sq.reset(); }
  else if (key == "fd_ts") { fd_ts = parse_double(key, value); ue_speed_mps.reset(); symbol_time_s.reset(); }
  else if (key == "ue_speed_mps") ue_speed_mps = parse_double(key, value);
  else if (key == "symbol_time_s") symbol_time_s = parse_double(key, value);
  else if (key == "path_loss_exponent_direct") path_loss_exponent_direct = parse_double(key, value);
  else if (key == "path_loss_exponent_ris") path_loss_exponent_ris = parse_double(key, value);
  else if (key == "path_loss_ref_db") path_loss_ref_db = parse_double(key, value);
  else if (key == "direct_blockage_db") direct_blockage_db = parse_double(key, value);
  else if (key == "kappa_override") kappa_override = parse_double(key, value);
  else if (key == "cascade_nlos_weight") {
    if (value == "area") cascade_nlos_weight = CascadeNlosWeight::kArea;
    else if (value == "unit") cascade_nlos_weight = CascadeNlosWeight::kUnit;
    else throw ConfigError("cascade_nlos_weight must be area|unit");
  } else if (key == "i2_cross_weight") {
    if (value == "symmetric") i2_cross_weight = I2CrossWeight::kSymmetric;
    else if (value == "serving") i2_cross_weight = I2CrossWeight::kServing;
    else throw ConfigError("i2_cross_weight must be symmetric|serving");
  } else if (key == "term_model") {
    if (value == "exact") term_model = TermModel::kExact;
    else if (value == "iid_gaussian") term_model = TermModel::kIidGaussian;
    else if (value == "simplified") term_model = TermModel::kSimplified;
    else throw ConfigError("term_model must be exact|iid_gaussian|simplified");
  } else if (key == "los_phase_mode") {
    if (value == "per_trial") los_phase_mode = LosPhaseMode::kPerTrial;
    else if (value == "fixed") los_phase_mode = LosPhaseMode::kFixed;
    else if (value == "zero") los_phase_mode = LosPhaseMode::kZero;
    else throw ConfigError("los_phase_mode must be per_trial|fixed|zero");
  } else if (key == "aging_innovation") {
    if (value == "correlated") aging_innovation = AgingInnovation::kCorrelated;
    else if (value == "iid_unit") aging_innovation = AgingInnovation::kIidUnit;
    else throw ConfigError("aging_innovation must be correlated|iid_unit");
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

void SystemConfig::apply_set(const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + key_value);
  apply_key(trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

SystemConfig SystemConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  SystemConfig cfg = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    cfg.apply_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.finalize();
  return cfg;
}

std::string SystemConfig::canonical_string() const {
  std::ostringstream os;
  os << "n_t=" << n_t << ";m_h=" << m_h << ";m_v=" << m_v << ";k_ue=" << k_ue
     << ";f_c=" << fmt(f_c) << ";d_h=" << fmt(d_h) << ";d_v=" << fmt(d_v)
     << ";bs=" << fmt(bs_pos.x()) << "," << fmt(bs_pos.y()) << "," << fmt(bs_pos.z())
     << ";ris=" << fmt(ris_pos.x()) << "," << fmt(ris_pos.y()) << "," << fmt(ris_pos.z());
  for (const auto& u : ue_pos)
    os << ";ue=" << fmt(u.x()) << "," << fmt(u.y()) << "," << fmt(u.z());
  os << ";p_tau_u=" << fmt(p_tau_u) << ";tau_p=" << tau_p << ";tau_u=" << tau_u
     << ";tau_c=" << tau_c << ";p_t=" << fmt(p_t) << ";sigma_d_sq=" << fmt(sigma_d_sq)
     << ";sigma_c_sq=" << fmt(sigma_c_sq) << ";sigma_k_sq=" << fmt(sigma_k_sq);
  if (sigma_e_sq) os << ";sigma_e_sq=" << fmt(*sigma_e_sq);
  if (rho_db) os << ";rho_db=" << fmt(*rho_db);
  os << ";fd_ts=" << fmt(fd_ts) << ";ple_d=" << fmt(path_loss_exponent_direct)
     << ";ple_r=" << fmt(path_loss_exponent_ris) << ";plref=" << fmt(path_loss_ref_db)
     << ";blk=" << fmt(direct_blockage_db);
  if (kappa_override) os << ";kappa_override=" << fmt(*kappa_override);
  os << ";nlos=" << (cascade_nlos_weight == CascadeNlosWeight::kArea ? "area" : "unit")
     << ";i2=" << (i2_cross_weight == I2CrossWeight::kSymmetric ? "symmetric" : "serving")
     << ";model="
     << (term_model == TermModel::kExact ? "exact"
                                         : term_model == TermModel::kIidGaussian ? "iid" : "simplified")
     << ";los="
     << (los_phase_mode == LosPhaseMode::kPerTrial ? "per_trial"
                                                   : los_phase_mode == LosPhaseMode::kFixed ? "fixed"
                                                                                            : "zero")
     << ";aging="
     << (aging_innovation == AgingInnovation::kCorrelated ? "correlated" : "iid_unit");
  return os.str();
}

std::uint64_t SystemConfig::hash() const {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : canonical_string()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rissim
