#include "rissim/pilots.hpp"

#include <cmath>

namespace rissim {

PilotBook build_pilots(int tau_p, int k_ue) {
  if (k_ue < 1) throw ConfigError("build_pilots: k_ue must be >= 1");
  if (tau_p < k_ue) throw ConfigError("build_pilots: tau_p must be >= k_ue");
  MatC psi(tau_p, k_ue);
  const double norm = 1.0 / std::sqrt(static_cast<double>(tau_p));
  for (int k = 0; k < k_ue; ++k)
    for (int t = 0; t < tau_p; ++t) {
      const double phase = -2.0 * kPi * t * k / tau_p;
      psi(t, k) = norm * cdouble(std::cos(phase), std::sin(phase));
    }
  return PilotBook(tau_p, std::move(psi));
}

}  // namespace rissim
