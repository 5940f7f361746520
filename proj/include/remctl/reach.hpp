#pragma once

// Reachability of target states under unitary control versus remote
// (entangle / steer / measure) control, and the parameter search used to
// compare the two on the two-segment NMR schedule.

#include "remctl/nelder_mead.hpp"
#include "remctl/protocol.hpp"
#include "remctl/qcore.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace remctl {

using Mat2 = Eigen::Matrix2cd;

/// U_0(t) = diag(e^{-i omega t}, e^{i omega t})
inline UnitaryGate gate_u0(double t, double omega) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -omega * t);
  m(1, 1) = std::polar(1.0, omega * t);
  return UnitaryGate(std::move(m));
}

/// U_1(t) = [[cos gt, -i sin gt], [-i sin gt, cos gt]]
inline UnitaryGate gate_u1(double t, double g) {
  const double c = std::cos(g * t);
  const double s = std::sin(g * t);
  CMatrix m(2, 2);
  m << c, Complex(0, -s), Complex(0, -s), c;
  return UnitaryGate(std::move(m));
}

/// U_1(T/2) U_0(T/2) as a fixed-size matrix, for the search inner loops.
inline Mat2 composed_matrix(double final_time, double omega, double g) {
  const double h = 0.5 * final_time;
  const Complex e = std::polar(1.0, -omega * h);
  const double c = std::cos(g * h);
  const double s = std::sin(g * h);
  Mat2 m;
  m(0, 0) = c * e;
  m(0, 1) = Complex(0, -s) * std::conj(e);
  m(1, 0) = Complex(0, -s) * e;
  m(1, 1) = c * std::conj(e);
  return m;
}

inline UnitaryGate composed_gate(double final_time, double omega, double g) {
  if (!(final_time > 0.0)) {
    throw std::invalid_argument(detail::concat("composed_gate: T must be > 0, got ", final_time));
  }
  return UnitaryGate(CMatrix(composed_matrix(final_time, omega, g)));
}

/// [[cos(theta/2), -sin(theta/2) e^{i phi}], [sin(theta/2), cos(theta/2) e^{i phi}]]
inline UnitaryGate restricted_gate(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex e = std::polar(1.0, phi);
  CMatrix m(2, 2);
  m << c, -s * e, s, c * e;
  return UnitaryGate(std::move(m));
}

/// |<a|b>|^2
inline double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(
        detail::concat("fidelity: dims ", a.dim(), " and ", b.dim(), " differ"));
  }
  return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

struct ParameterRange {
  double lo;
  double hi;
  bool hi_open = false;

  double clamp(double x) const {
    const double top = hi_open ? std::nextafter(hi, lo) : hi;
    return std::clamp(x, lo, top);
  }
};

enum class FamilyKind { Restricted, Nmr };

/// Upper theta bound of the restricted family exactly as printed with its
/// matrix. It covers only half the sphere under the Kraus route, see
/// GateFamily::restricted().
inline constexpr double kPrintedThetaMax = std::numbers::pi / 2;

struct GateFamily {
  FamilyKind kind;
  ParameterRange first;   ///< theta or omega
  ParameterRange second;  ///< phi or g

  /// theta in [0, theta_max], phi in [0, pi). The default theta_max = pi
  /// treats theta as the Bloch polar angle of the half-angle matrix; this is
  /// the range under which the one-shot unitary set covers two quadrants and
  /// the Kraus set the whole sphere.
  static GateFamily restricted(double theta_max = std::numbers::pi) {
    return {FamilyKind::Restricted, {0.0, theta_max, false}, {0.0, std::numbers::pi, true}};
  }

  /// omega, g in [0, 2 pi]
  static GateFamily nmr() {
    return {FamilyKind::Nmr, {0.0, 2 * std::numbers::pi, false}, {0.0, 2 * std::numbers::pi, false}};
  }

  UnitaryGate gate(double p1, double p2, double final_time = 1.0) const {
    p1 = first.clamp(p1);
    p2 = second.clamp(p2);
    return kind == FamilyKind::Restricted ? restricted_gate(p1, p2)
                                          : composed_gate(final_time, p1, p2);
  }
};

// --- reachable-set coverage --------------------------------------------------

struct SphereGrid {
  std::size_t bands = 32;     ///< uniform in cos(polar angle)
  std::size_t azimuths = 64;  ///< uniform in azimuth
};

/// Equal-area cell index (band * azimuths + azimuth) of a qubit state.
inline std::size_t sphere_cell(const CVector& psi, const SphereGrid& grid) {
  const double z = std::norm(psi[0]) - std::norm(psi[1]);
  const Complex xy = std::conj(psi[0]) * psi[1];  // (x + i y) / 2
  double az = std::abs(xy) > 1e-15 ? std::arg(xy) : 0.0;
  if (az < 0) az += 2 * std::numbers::pi;
  const auto band = std::min<std::size_t>(
      static_cast<std::size_t>((z + 1.0) * 0.5 * static_cast<double>(grid.bands)), grid.bands - 1);
  const auto azi = std::min<std::size_t>(
      static_cast<std::size_t>(az / (2 * std::numbers::pi) * static_cast<double>(grid.azimuths)),
      grid.azimuths - 1);
  return band * grid.azimuths + azi;
}

/// Fraction of sphere cells hit by one application of the family to
/// `initial` (use_kraus = false), or by the normalized Kraus branches of a
/// pair entangled from `initial` (use_kraus = true). `sweep` is the number of
/// parameter steps per axis; 0 picks 8 x max(bands, azimuths).
inline double reachable_set_coverage(const PureState& initial, const GateFamily& family,
                                     bool use_kraus, const SphereGrid& grid,
                                     std::size_t sweep = 0) {
  if (initial.dim() != 2) throw std::invalid_argument("reachable_set_coverage: N must be 2");
  if (std::abs(std::norm(initial[0]) - std::norm(initial[1])) > 1e-9) {
    throw std::invalid_argument("reachable_set_coverage: initial state must lie on the equator");
  }
  if (grid.bands == 0 || grid.azimuths == 0) {
    throw std::invalid_argument("reachable_set_coverage: empty sphere grid");
  }
  if (sweep == 0) sweep = 8 * std::max(grid.bands, grid.azimuths);

  const CVector& a = initial.amplitudes();
  std::vector<char> hit(grid.bands * grid.azimuths, 0);
  const auto steps = [&](const ParameterRange& r) {
    std::vector<double> v;
    const std::size_t count = r.hi_open ? sweep : sweep + 1;
    for (std::size_t k = 0; k < count; ++k)
      v.push_back(r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(sweep));
    return v;
  };
  const auto p1s = steps(family.first);
  const auto p2s = steps(family.second);
  for (double p1 : p1s) {
    for (double p2 : p2s) {
      const UnitaryGate u = family.gate(p1, p2);
      if (!use_kraus) {
        hit[sphere_cell(u.matrix() * a, grid)] = 1;
        continue;
      }
      for (std::size_t m = 0; m < 2; ++m) {
        CVector b(2);
        b << u(m, 0) * a[0], u(m, 1) * a[1];
        const double p = b.squaredNorm();
        if (p < kZeroProbability) continue;
        hit[sphere_cell(b / std::sqrt(p), grid)] = 1;
      }
    }
  }
  const auto covered = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  return covered / static_cast<double>(hit.size());
}

/// All states reachable from `initial` by words of length <= max_length over
/// `gates`, deduplicated as rays. Includes the empty word.
inline std::vector<PureState> enumerate_reachable(const PureState& initial,
                                                  std::span<const UnitaryGate> gates,
                                                  std::size_t max_length) {
  std::vector<PureState> seen{initial};
  std::vector<PureState> frontier{initial};
  const auto known = [&](const CVector& v) {
    return std::any_of(seen.begin(), seen.end(), [&](const PureState& s) {
      return phase_distance(s.amplitudes(), v) < 1e-9;
    });
  };
  for (std::size_t len = 0; len < max_length; ++len) {
    std::vector<PureState> next;
    for (const auto& s : frontier) {
      for (const auto& g : gates) {
        PureState t = apply_target_unitary(s, g);
        if (known(t.amplitudes())) continue;
        seen.push_back(t);
        next.push_back(std::move(t));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// --- optimization trials -----------------------------------------------------

enum class Protocol { Unitary, Remote };

/// How the remote protocol prepares the target/control pair.
enum class RemoteEntanglement {
  Maximal,      ///< a_i = 1/sqrt(N), independent of the initial state
  FromInitial,  ///< generalized CNOT onto |e_0>, so a_i = initial amplitudes
};

inline const char* to_string(Protocol p) { return p == Protocol::Unitary ? "unitary" : "remote"; }

struct TrialSpec {
  PureState initial;
  PureState target;
  double final_time;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  RemoteEntanglement entanglement = RemoteEntanglement::Maximal;
};

struct TrialResult {
  Protocol protocol;
  bool reached;
  double best_fidelity;
  double omega;
  double g;
  std::optional<std::size_t> branch;  ///< 0-based; empty for unitary control
  double branch_probability;
  double net_success_probability;
};

struct SearchOptions {
  std::size_t grid = 64;         ///< points per axis over [0, 2 pi)
  int refine_iterations = 200;
};

struct SearchPoint {
  double omega;
  double g;
  double value;
};

/// Exhaustive evaluation of `objective(omega, g)` at k * 2 pi / n, k < n on
/// both axes; returns the maximum (first hit on ties, omega-major order).
/// Grids with n and 2n points are nested.
template <class Objective>
SearchPoint grid_search(Objective&& objective, std::size_t n) {
  SearchPoint best{0.0, 0.0, -1.0};
  const double step = 2 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = step * static_cast<double>(i);
      const double g = step * static_cast<double>(j);
      const double v = objective(w, g);
      if (v > best.value) best = {w, g, v};
    }
  }
  return best;
}

/// Grid search followed by Nelder-Mead refinement from the best grid point.
/// Parameters are clamped to [0, 2 pi].
template <class Objective>
SearchPoint grid_and_refine(Objective&& objective, const SearchOptions& opt) {
  const ParameterRange range = GateFamily::nmr().first;
  const auto clamped = [&](double w, double g) { return objective(range.clamp(w), range.clamp(g)); };
  const SearchPoint coarse = grid_search(clamped, opt.grid);
  if (opt.refine_iterations <= 0) return coarse;
  const auto res = nelder_mead<2>(
      [&](const std::array<double, 2>& p) { return -clamped(p[0], p[1]); },
      std::array<double, 2>{coarse.omega, coarse.g}, 2 * std::numbers::pi / static_cast<double>(opt.grid),
      opt.refine_iterations);
  if (-res.value <= coarse.value) return coarse;
  return {range.clamp(res.point[0]), range.clamp(res.point[1]), -res.value};
}

namespace detail {

/// |<target|v>|^2, capped at 1 so rounding cannot break ties between
/// equally good parameters.
inline double overlap2(const CVector& target, const Eigen::Vector2cd& v) {
  return std::min(1.0, std::norm(std::conj(target[0]) * v[0] + std::conj(target[1]) * v[1]));
}

inline void require_qubit(const TrialSpec& spec) {
  if (spec.initial.dim() != 2 || spec.target.dim() != 2) {
    throw std::invalid_argument("trial: the NMR schedule is defined for N = 2");
  }
  if (!(spec.final_time > 0.0)) {
    throw std::invalid_argument(detail::concat("trial: final time must be > 0, got ", spec.final_time));
  }
}

/// Branch-m state of the remote protocol, unnormalized, and its probability.
inline std::pair<Eigen::Vector2cd, double> remote_branch(const Mat2& u, const CVector& a,
                                                         std::size_t m) {
  Eigen::Vector2cd b(u(static_cast<Eigen::Index>(m), 0) * a[0],
                     u(static_cast<Eigen::Index>(m), 1) * a[1]);
  return {b, b.squaredNorm()};
}

}  // namespace detail

inline TrialResult optimize_unitary(const TrialSpec& spec, const SearchOptions& opt = {}) {
  detail::require_qubit(spec);
  const CVector& x = spec.initial.amplitudes();
  const CVector& y = spec.target.amplitudes();
  const Eigen::Vector2cd x2(x[0], x[1]);
  const auto objective = [&](double w, double g) {
    const Eigen::Vector2cd v = composed_matrix(spec.final_time, w, g) * x2;
    return detail::overlap2(y, v);
  };
  const SearchPoint best = grid_and_refine(objective, opt);
  const double f = std::min(1.0, best.value);
  const bool reached = f >= 1.0 - spec.epsilon;
  return {Protocol::Unitary, reached, f, best.omega, best.g, std::nullopt, 1.0, reached ? 1.0 : 0.0};
}

inline EntangledPair remote_pair(const TrialSpec& spec) {
  if (spec.entanglement == RemoteEntanglement::FromInitial)
    return entangle(spec.initial, PureState::basis(spec.initial.dim(), 0));
  const auto n = static_cast<Eigen::Index>(spec.initial.dim());
  return make_pair(CVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

/// Remote control: the pair from remote_pair(), the composed gate on the
/// control, computational-basis measurement. The trial succeeds when some
/// branch lands within epsilon of the target; the reported branch is the
/// most probable successful one.
inline TrialResult optimize_remote(const TrialSpec& spec, const SearchOptions& opt = {}) {
  detail::require_qubit(spec);
  const EntangledPair pair = remote_pair(spec);
  const CVector& a = pair.schmidt_coefficients();
  const CVector& y = spec.target.amplitudes();

  struct Candidate {
    std::size_t branch;
    SearchPoint point;
    double probability;
  };
  std::vector<Candidate> candidates;
  for (std::size_t m = 0; m < 2; ++m) {
    const auto objective = [&](double w, double g) {
      const auto [b, p] = detail::remote_branch(composed_matrix(spec.final_time, w, g), a, m);
      return p < kZeroProbability ? 0.0 : std::min(1.0, detail::overlap2(y, b) / p);
    };
    const SearchPoint best = grid_and_refine(objective, opt);
    const double p =
        detail::remote_branch(composed_matrix(spec.final_time, best.omega, best.g), a, m).second;
    candidates.push_back({m, best, p});
  }

  const double threshold = 1.0 - spec.epsilon;
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (std::min(1.0, c.point.value) < threshold) continue;
    if (chosen == nullptr || c.probability > chosen->probability) chosen = &c;
  }
  const bool reached = chosen != nullptr;
  if (!reached) {
    chosen = &candidates[0];
    for (const auto& c : candidates)
      if (c.point.value > chosen->point.value) chosen = &c;
  }
  const double f = std::min(1.0, chosen->point.value);
  return {Protocol::Remote, reached,         f, chosen->point.omega, chosen->point.g,
          chosen->branch,   chosen->probability, reached ? chosen->probability : 0.0};
}

}  // namespace remctl
