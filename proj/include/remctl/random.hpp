#pragma once

// Seeded sampling. Everything here is bit-reproducible across platforms:
// std::mt19937_64 is fully specified, and the uniform/normal transforms are
// done by hand instead of through the implementation-defined distributions.

#include "remctl/qcore.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace remctl {

/// SplitMix64 finalizer; used to derive per-trial seeds from a master seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// seed_i = master XOR mix(i)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ mix64(index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (cosine branch only, one draw per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
};

/// Haar-random pure state: i.i.d. complex Gaussians, normalized.
inline PureState haar_state(std::size_t dim, Rng& rng) {
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  return PureState::normalized(std::move(v));
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with R's diagonal phases folded back into Q.
inline UnitaryGate haar_unitary(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return UnitaryGate(std::move(q));
}

/// Random mixed state rho = G G^dagger / tr, G complex Ginibre (dim x dim).
inline DensityMatrix random_density(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

}  // namespace remctl
