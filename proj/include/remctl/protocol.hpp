#pragma once

// Remote control of a target system through an entangled control partner:
// entangle, steer the control with a unitary, measure the control in the
// computational basis. Each outcome m acts on the target through the
// diagonal Kraus operator diag(row m of U).

#include "remctl/qcore.hpp"
#include "remctl/random.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace remctl {

/// Branches with probability below this are treated as impossible.
inline constexpr double kZeroProbability = 1e-14;

/// Target (slot A) and control (slot B) in Schmidt form sum_i a_i |i>|i>.
class EntangledPair {
 public:
  std::size_t dim() const { return static_cast<std::size_t>(coeffs_.size()); }
  const BipartiteState& state() const { return state_; }
  const CVector& schmidt_coefficients() const { return coeffs_; }

 private:
  explicit EntangledPair(CVector coeffs) : state_(build(coeffs)), coeffs_(std::move(coeffs)) {}

  static BipartiteState build(const CVector& a) {
    const auto n = static_cast<std::size_t>(a.size());
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(n * n));
    for (std::size_t i = 0; i < n; ++i)
      amps[static_cast<Eigen::Index>(i * n + i)] = a[static_cast<Eigen::Index>(i)];
    return BipartiteState(n, n, std::move(amps));
  }

  friend EntangledPair make_pair(const CVector& coeffs);
  friend EntangledPair entangle(const PureState& target, const PureState& control);

  BipartiteState state_;
  CVector coeffs_;
};

/// |i>|j> -> |i>|(i + j) mod n> on an n x n bipartite space.
inline CMatrix generalized_cnot(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n * n);
  CMatrix g = CMatrix::Zero(nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g(static_cast<Eigen::Index>(i * n + (i + j) % n), static_cast<Eigen::Index>(i * n + j)) = 1.0;
  return g;
}

inline EntangledPair make_pair(const CVector& coeffs) {
  if (coeffs.size() < 2) {
    throw std::invalid_argument(
        detail::concat("make_pair: need at least 2 coefficients, got ", coeffs.size()));
  }
  const double norm2 = coeffs.squaredNorm();
  if (norm2 == 0.0) throw std::invalid_argument("make_pair: all-zero Schmidt coefficients");
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw std::invalid_argument(
        detail::concat("make_pair: sum |a_i|^2 = ", norm2, " is not 1 within 1e-9"));
  }
  return EntangledPair(coeffs / std::sqrt(norm2));
}

/// Generalized CNOT with the control prepared in |e_0>, so a_i = c_i. A
/// global phase on the control is absorbed into the coefficients.
inline EntangledPair entangle(const PureState& target, const PureState& control) {
  if (target.dim() != control.dim()) {
    throw std::invalid_argument(detail::concat("entangle: target dim ", target.dim(),
                                               " != control dim ", control.dim()));
  }
  if (std::abs(std::abs(control[0]) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("entangle: entangler defined for reference control state |e_0>");
  }
  const std::size_t n = target.dim();
  const BipartiteState product = tensor(target, control);
  const CVector after = generalized_cnot(n) * product.amplitudes();
  CVector a(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    a[static_cast<Eigen::Index>(i)] = after[static_cast<Eigen::Index>(i * n + i)];
  return EntangledPair(a / a.norm());
}

namespace detail {

inline void require_same_dim(std::size_t pair_dim, const UnitaryGate& u, const char* where) {
  if (pair_dim != u.dim()) {
    throw std::invalid_argument(
        concat(where, ": pair dim ", pair_dim, " != unitary dim ", u.dim()));
  }
}

}  // namespace detail

/// amplitude(i, j) = U_ji a_i
inline BipartiteState apply_control_unitary(const EntangledPair& pair, const UnitaryGate& u) {
  detail::require_same_dim(pair.dim(), u, "apply_control_unitary");
  const std::size_t n = pair.dim();
  const CVector& a = pair.schmidt_coefficients();
  CVector amps(static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      amps[static_cast<Eigen::Index>(i * n + j)] = u(j, i) * a[static_cast<Eigen::Index>(i)];
  amps /= amps.norm();
  return BipartiteState(n, n, std::move(amps));
}

/// P_m = sum_i |U_mi|^2 |a_i|^2
inline std::vector<double> outcome_probabilities(const EntangledPair& pair, const UnitaryGate& u) {
  detail::require_same_dim(pair.dim(), u, "outcome_probabilities");
  const std::size_t n = pair.dim();
  const CVector& a = pair.schmidt_coefficients();
  std::vector<double> p(n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      p[m] += std::norm(u(m, i)) * std::norm(a[static_cast<Eigen::Index>(i)]);
  return p;
}

struct SeededDraw {
  std::uint64_t seed;
};

/// Either a fixed branch index or a reproducible random draw.
using OutcomeSelection = std::variant<std::size_t, SeededDraw>;

struct MeasurementOutcome {
  std::size_t branch;
  double probability;
  PureState target;
  PureState control;
};

/// Inverse-CDF selection over `probs` for a uniform variate u in [0, 1),
/// never returning an impossible branch.
inline std::size_t sample_branch(std::span<const double> probs, double u) {
  double total = 0.0;
  for (double p : probs) total += p;
  double acc = 0.0;
  std::size_t last_possible = probs.size();
  for (std::size_t m = 0; m < probs.size(); ++m) {
    if (probs[m] < kZeroProbability) continue;
    last_possible = m;
    acc += probs[m] / total;
    if (u < acc) return m;
  }
  if (last_possible == probs.size()) throw std::domain_error("sample_branch: no possible branch");
  return last_possible;
}

/// Projects the control (slot B) onto |e_m> and returns the disentangled target.
inline MeasurementOutcome measure_control(const BipartiteState& state, OutcomeSelection selection) {
  const std::size_t nt = state.dim_a();
  const std::size_t nc = state.dim_b();
  std::vector<double> probs(nc, 0.0);
  for (std::size_t m = 0; m < nc; ++m)
    for (std::size_t k = 0; k < nt; ++k) probs[m] += std::norm(state.amplitude(k, m));

  std::size_t m = 0;
  if (const auto* fixed = std::get_if<std::size_t>(&selection)) {
    m = *fixed;
    if (m >= nc) {
      throw std::invalid_argument(
          detail::concat("measure_control: branch ", m, " out of range for dim ", nc));
    }
  } else {
    Rng rng(std::get<SeededDraw>(selection).seed);
    m = sample_branch(probs, rng.uniform());
  }
  if (probs[m] < kZeroProbability) {
    throw std::domain_error(detail::concat("measure_control: zero-probability branch ", m,
                                           " (P = ", probs[m], ")"));
  }

  CVector target(static_cast<Eigen::Index>(nt));
  for (std::size_t k = 0; k < nt; ++k) target[static_cast<Eigen::Index>(k)] = state.amplitude(k, m);
  return MeasurementOutcome{m, probs[m], PureState::normalized(std::move(target)),
                            PureState::basis(nc, m)};
}

struct KrausBranch {
  std::size_t index;
  CMatrix op;  ///< diag(row `index` of U), unnormalized
  double probability;
};

inline std::vector<KrausBranch> kraus_branches(const UnitaryGate& u, const EntangledPair& pair) {
  detail::require_same_dim(pair.dim(), u, "kraus_branches");
  const auto probs = outcome_probabilities(pair, u);
  const std::size_t n = u.dim();
  std::vector<KrausBranch> out;
  out.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    CMatrix op = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l)
      op(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = u(m, l);
    out.push_back({m, std::move(op), probs[m]});
  }
  return out;
}

/// Branch state normalize(op * a); throws for impossible branches.
inline PureState apply_kraus(const KrausBranch& branch, const CVector& a) {
  CVector v = branch.op * a;
  if (v.squaredNorm() < kZeroProbability) {
    throw std::domain_error(
        detail::concat("apply_kraus: zero-probability branch ", branch.index));
  }
  return PureState::normalized(std::move(v));
}

/// sum_m K_m rho K_m^dagger
inline CMatrix nonselective_channel(std::span<const KrausBranch> branches, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& b : branches) out += b.op * rho * b.op.adjoint();
  return out;
}

inline PureState apply_target_unitary(const PureState& state, const UnitaryGate& u) {
  if (state.dim() != u.dim()) {
    throw std::invalid_argument(detail::concat("apply_target_unitary: state dim ", state.dim(),
                                               " != unitary dim ", u.dim()));
  }
  return PureState::normalized(u.matrix() * state.amplitudes());
}

struct BranchedBipartite {
  BipartiteState state;
  double probability;
};

/// Remote control acting on a bipartite target (t_a, t_b). The control is
/// entangled with t_a by the generalized CNOT, steered by `u`, and projected
/// on |e_branch>. For a Schmidt-form target sum_i a_i |i>|i> the result is
/// sum_i a_i U_{branch,i} |i>|i> / sqrt(P).
inline BranchedBipartite remote_step_on_bipartite_target(const BipartiteState& target_pair,
                                                         const UnitaryGate& u,
                                                         std::size_t branch) {
  const std::size_t na = target_pair.dim_a();
  const std::size_t nb = target_pair.dim_b();
  const std::size_t nc = u.dim();
  if (na != nc) {
    throw std::invalid_argument(detail::concat("remote_step_on_bipartite_target: t_a dim ", na,
                                               " != control dim ", nc));
  }
  if (branch >= nc) {
    throw std::invalid_argument(
        detail::concat("remote_step_on_bipartite_target: branch ", branch, " out of range"));
  }
  // Tripartite (t_a, t_b, c) after entangling: psi_ij |i>|j>|i>.
  const auto idx = [&](std::size_t i, std::size_t j, std::size_t c) {
    return static_cast<Eigen::Index>((i * nb + j) * nc + c);
  };
  CVector chi = CVector::Zero(static_cast<Eigen::Index>(na * nb * nc));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) chi[idx(i, j, i)] = target_pair.amplitude(i, j);

  // Steer the control, then keep the |e_branch> component.
  CVector projected(static_cast<Eigen::Index>(na * nb));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      Complex acc{};
      for (std::size_t c = 0; c < nc; ++c) acc += u(branch, c) * chi[idx(i, j, c)];
      projected[static_cast<Eigen::Index>(i * nb + j)] = acc;
    }
  }
  const double p = projected.squaredNorm();
  if (p < kZeroProbability) {
    throw std::domain_error(
        detail::concat("remote_step_on_bipartite_target: zero-probability branch ", branch));
  }
  projected /= std::sqrt(p);
  return {BipartiteState(na, nb, std::move(projected)), p};
}

inline BranchedBipartite remote_step_on_bipartite_target(const CVector& coeffs,
                                                         const UnitaryGate& u,
                                                         std::size_t branch) {
  return remote_step_on_bipartite_target(make_pair(coeffs).state(), u, branch);
}

}  // namespace remctl
