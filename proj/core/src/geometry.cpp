#include "rissim/geometry.hpp"

#include <cmath>

namespace rissim {

std::vector<Vec3> ris_element_positions(int m_h, int m_v, double d_h, double d_v) {
  if (m_h < 1 || m_v < 1) throw ConfigError("ris_element_positions: grid dimensions must be >= 1");
  std::vector<Vec3> pos;
  pos.reserve(static_cast<std::size_t>(m_h) * m_v);
  for (int m = 0; m < m_h * m_v; ++m) {
    pos.emplace_back(0.0, (m % m_h) * d_h, (m / m_h) * d_v);
  }
  return pos;
}

double rician_factor(double d_br) {
  if (d_br < 0.0) throw ConfigError("rician_factor: distance must be nonnegative");
  return std::pow(10.0, 1.3 - 0.003 * d_br);
}

double path_loss(double distance, double exponent, double ref_db) {
  if (distance <= 0.0) throw ConfigError("path_loss: distance must be positive");
  return db_to_linear(ref_db) * std::pow(distance, -exponent);
}

}  // namespace rissim
