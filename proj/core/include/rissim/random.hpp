#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "rissim/common.hpp"

namespace rissim {

/// splitmix64 step, used to expand seeds into stream states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator. Streams are derived from (seed, tag words) so that
/// trial or purpose indices map to statistically independent sequences and
/// adding trials never perturbs earlier ones.
class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(std::uint64_t seed, std::uint64_t tag0 = 0, std::uint64_t tag1 = 0,
                     std::uint64_t tag2 = 0) {
    std::uint64_t mix = seed;
    state_[0] = splitmix64(mix);
    mix ^= 0xd2b74407b1ce6e93ULL * (tag0 + 1);
    state_[1] = splitmix64(mix);
    mix ^= 0x8bb84b93962eacc9ULL * (tag1 + 1);
    state_[2] = splitmix64(mix);
    mix ^= 0x2f6d2b6e4ddf2be7ULL * (tag2 + 1);
    state_[3] = splitmix64(mix);
    // warm up so tag structure does not leak into the first outputs
    for (int i = 0; i < 8; ++i) next_u64();
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in (0, 1]; never returns 0 so log() is safe.
  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform in [0, 2*pi).
  double uniform_phase() {
    return 2.0 * kPi * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard real normal via Box-Muller (explicit so sequences are
  /// reproducible independent of the standard library implementation).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = uniform_phase();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly symmetric complex normal, unit variance per complex entry
  /// (variance 1/2 per real component).
  cdouble complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double phi = uniform_phase();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  void fill_complex_normal(MatC& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = complex_normal();
  }

  void fill_complex_normal(VecC& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal();
  }

  /// Vector of unit-modulus entries with i.i.d. uniform phases.
  void fill_unit_phases(VecC& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double p = uniform_phase();
      v(i) = {std::cos(p), std::sin(p)};
    }
  }

  void fill_unit_phases(MatC& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double p = uniform_phase();
        m(r, c) = {std::cos(p), std::sin(p)};
      }
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rissim
