#pragma once

#include <vector>

#include "rissim/common.hpp"

namespace rissim {

/// Positions of the RIS elements on a rectangular grid in the y-z plane.
/// Element m (1-based) sits at (0, mod(m-1, m_h)*d_h, floor((m-1)/m_h)*d_v).
std::vector<Vec3> ris_element_positions(int m_h, int m_v, double d_h, double d_v);

/// Distance-dependent Rician factor, kappa = 10^(1.3 - 0.003 d) with d in meters.
double rician_factor(double d_br);

/// Log-distance path loss, beta = 10^(ref_db/10) * d^(-exponent), linear scale.
double path_loss(double distance, double exponent, double ref_db);

}  // namespace rissim
