#pragma once

#include "rissim/common.hpp"

namespace rissim {

/// Orthonormal pilot book: the first K columns of the unitary tau_p-point
/// DFT matrix. psi()^H psi() = I_K.
class PilotBook {
 public:
  PilotBook() = default;
  PilotBook(int tau_p, MatC psi) : tau_p_(tau_p), psi_(std::move(psi)) {}

  int tau_p() const { return tau_p_; }
  int k_ue() const { return static_cast<int>(psi_.cols()); }
  const MatC& psi() const { return psi_; }
  VecC column(int k) const { return psi_.col(k); }

 private:
  int tau_p_ = 0;
  MatC psi_;
};

PilotBook build_pilots(int tau_p, int k_ue);

}  // namespace rissim
