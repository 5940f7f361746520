#pragma once

// Remote control with a control system that decoheres: the environment keeps
// a pointer record of the control's basis index. The target never couples to
// the environment.

#include "remctl/protocol.hpp"
#include "remctl/qcore.hpp"

#include <array>

namespace remctl {

/// Amplitudes row-major over (target, control, environment).
class TripartiteState {
 public:
  TripartiteState(std::array<std::size_t, 3> dims, CVector amplitudes)
      : dims_(dims), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != dims[0] * dims[1] * dims[2]) {
      throw std::invalid_argument(detail::concat("TripartiteState: dims ", dims[0], "x", dims[1],
                                                 "x", dims[2], " vs ", amps_.size(),
                                                 " amplitudes"));
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("TripartiteState: amplitudes not normalized (norm^2 = ", norm2, ")"));
    }
  }

  const std::array<std::size_t, 3>& dims() const { return dims_; }
  const CVector& amplitudes() const { return amps_; }

  std::size_t index(std::size_t t, std::size_t c, std::size_t e) const {
    return (t * dims_[1] + c) * dims_[2] + e;
  }
  Complex amplitude(std::size_t t, std::size_t c, std::size_t e) const {
    return amps_[static_cast<Eigen::Index>(index(t, c, e))];
  }

  DensityMatrix reduced(std::size_t subsystem) const {
    CMatrix rho = reduced_density(amps_, dims_, subsystem);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
  }
  DensityMatrix reduced_target() const { return reduced(0); }
  DensityMatrix reduced_control() const { return reduced(1); }

 private:
  std::array<std::size_t, 3> dims_;
  CVector amps_;
};

/// sum_i a_i |e_i>|e_i>|eps_i>, with eps_i the first N environment states.
inline TripartiteState attach_environment(const EntangledPair& pair, std::size_t env_dim) {
  const std::size_t n = pair.dim();
  if (env_dim < n) {
    throw std::invalid_argument(
        detail::concat("attach_environment: environment dim ", env_dim, " < system dim ", n));
  }
  const std::array<std::size_t, 3> dims{n, n, env_dim};
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(n * n * env_dim));
  for (std::size_t i = 0; i < n; ++i)
    amps[static_cast<Eigen::Index>((i * n + i) * env_dim + i)] =
        pair.schmidt_coefficients()[static_cast<Eigen::Index>(i)];
  return TripartiteState(dims, std::move(amps));
}

namespace detail {

inline void require_control_dim(const TripartiteState& s, const UnitaryGate& u, const char* where) {
  if (s.dims()[1] != u.dim()) {
    throw std::invalid_argument(
        concat(where, ": control dim ", s.dims()[1], " != unitary dim ", u.dim()));
  }
}

}  // namespace detail

/// U on the control only; the environment keeps its old record.
inline TripartiteState apply_control_unitary(const TripartiteState& s, const UnitaryGate& u) {
  detail::require_control_dim(s, u, "apply_control_unitary");
  const auto [nt, nc, ne] = s.dims();
  CVector out = CVector::Zero(s.amplitudes().size());
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t j = 0; j < nc; ++j) {
        Complex acc{};
        for (std::size_t c = 0; c < nc; ++c) acc += u(j, c) * s.amplitude(t, c, e);
        out[static_cast<Eigen::Index>(s.index(t, j, e))] = acc;
      }
  out /= out.norm();
  return TripartiteState(s.dims(), std::move(out));
}

/// True when the environment holds a pointer record of the control:
/// amplitude(t, c, e) vanishes unless e == c.
inline bool is_pointer_form(const TripartiteState& s, double tol = 1e-12) {
  const auto [nt, nc, ne] = s.dims();
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t e = 0; e < ne; ++e)
        if (e != c && std::abs(s.amplitude(t, c, e)) > tol) return false;
  return true;
}

/// Steer the control, then let the environment re-record the new control
/// index. Input must be in pointer form; output is
/// sum_ij U_ji a_i |e_i>|e_j>|eps_j> for the Schmidt-form input.
inline TripartiteState decohering_control_unitary(const TripartiteState& s, const UnitaryGate& u) {
  detail::require_control_dim(s, u, "decohering_control_unitary");
  if (!is_pointer_form(s)) {
    throw std::invalid_argument(
        "decohering_control_unitary: environment does not hold a pointer record of the control");
  }
  const auto [nt, nc, ne] = s.dims();
  CVector out = CVector::Zero(s.amplitudes().size());
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t j = 0; j < nc; ++j) {
      Complex acc{};
      for (std::size_t c = 0; c < nc; ++c) acc += u(j, c) * s.amplitude(t, c, c);
      out[static_cast<Eigen::Index>(s.index(t, j, j))] = acc;
    }
  out /= out.norm();
  return TripartiteState(s.dims(), std::move(out));
}

struct EnvironmentBranch {
  PureState target;
  double probability;
};

/// Projects the control on |e_m>. The target must come out unentangled from
/// the environment (rank-1 remainder), which holds for pointer-form states.
inline EnvironmentBranch measure_with_environment(const TripartiteState& s, std::size_t branch) {
  const auto [nt, nc, ne] = s.dims();
  if (branch >= nc) {
    throw std::invalid_argument(
        detail::concat("measure_with_environment: branch ", branch, " out of range"));
  }
  CMatrix rest(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(ne));
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t e = 0; e < ne; ++e)
      rest(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(e)) = s.amplitude(t, branch, e);
  const double p = rest.squaredNorm();
  if (p < kZeroProbability) {
    throw std::domain_error(
        detail::concat("measure_with_environment: zero-probability branch ", branch));
  }
  rest /= std::sqrt(p);
  const auto split = schmidt_decompose(BipartiteState::from_matrix(rest));
  if (split.coefficients.size() > 1 && split.coefficients[1] > 1e-10) {
    throw std::domain_error("measure_with_environment: target stays entangled with environment");
  }
  return {PureState::normalized(split.basis_a[0]), p};
}

}  // namespace remctl
