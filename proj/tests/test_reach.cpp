#include <catch2/catch_amalgamated.hpp>

#include "remctl/random.hpp"
#include "remctl/reach.hpp"

#include "test_support.hpp"

#include <numbers>

using namespace remctl;
using Catch::Matchers::WithinAbs;
using remctl::testing::mat2;
using remctl::testing::max_diff;
using remctl::testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;
const double kS = 1.0 / std::sqrt(2.0);
const Complex kI(0, 1);

// The two NMR segments written out by hand.
CMatrix u0_oracle(double t, double w) {
  return mat2(std::exp(-kI * (w * t)), 0, 0, std::exp(kI * (w * t)));
}
CMatrix u1_oracle(double t, double g) {
  return mat2(std::cos(g * t), -kI * std::sin(g * t), -kI * std::sin(g * t), std::cos(g * t));
}

// Cell lookup from the Bloch vector instead of amplitudes.
std::size_t bloch_cell(const CVector& psi, std::size_t bands, std::size_t azimuths) {
  const CMatrix rho = psi * psi.adjoint();
  const double x = 2 * rho(0, 1).real();
  const double y = -2 * rho(0, 1).imag();
  const double z = (rho(0, 0) - rho(1, 1)).real();
  double az = std::atan2(y, x);
  if (az < 0) az += 2 * kPi;
  const auto b = std::min(bands - 1, static_cast<std::size_t>((z + 1) / 2 * bands));
  const auto a = std::min(azimuths - 1, static_cast<std::size_t>(az / (2 * kPi) * azimuths));
  return b * azimuths + a;
}

// Coverage with its own sweep resolution and hand-written gate matrix.
double coverage_oracle(double theta_max, bool kraus, std::size_t steps) {
  const std::size_t bands = 32, azimuths = 64;
  std::vector<char> hit(bands * azimuths, 0);
  const CVector a = vec({kS, kS});
  for (std::size_t i = 0; i <= steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const double th = theta_max * i / steps;
      const double ph = kPi * j / steps;
      const Complex e = std::polar(1.0, ph);
      const CMatrix u = mat2(std::cos(th / 2), -std::sin(th / 2) * e, std::sin(th / 2),
                             std::cos(th / 2) * e);
      if (!kraus) {
        hit[bloch_cell(u * a, bands, azimuths)] = 1;
        continue;
      }
      for (Eigen::Index m = 0; m < 2; ++m) {
        CVector b = vec({u(m, 0) * a[0], u(m, 1) * a[1]});
        if (b.squaredNorm() < 1e-14) continue;
        hit[bloch_cell(b / b.norm(), bands, azimuths)] = 1;
      }
    }
  }
  return std::count(hit.begin(), hit.end(), 1) / static_cast<double>(hit.size());
}

// Maximum of |<target|U(T,w,g)|initial>|^2 over a fine (w, g) lattice.
double fidelity_oracle(const CVector& initial, const CVector& target, double t, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      const double w = 2 * kPi * i / n;
      const double g = 2 * kPi * j / n;
      const CVector v = u1_oracle(t / 2, g) * u0_oracle(t / 2, w) * initial;
      best = std::max(best, std::norm(target.dot(v)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("gate_u0", "[reach]") {
  CHECK(max_diff(gate_u0(0.0, 3.7).matrix(), CMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_diff(gate_u0(1.0, kPi / 2).matrix(), mat2(-kI, 0, 0, kI)) < 1e-15);
  CHECK(max_diff(gate_u0(0.5, 2 * kPi).matrix(), -CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("gate_u1", "[reach]") {
  CHECK(max_diff(gate_u1(2.0, 0.0).matrix(), CMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_diff(gate_u1(1.0, kPi / 2).matrix(), mat2(0, -kI, -kI, 0)) < 1e-15);
  CHECK(max_diff(gate_u1(0.25, kPi).matrix(), mat2(kS, -kI * kS, -kI * kS, kS)) < 1e-15);
}

TEST_CASE("composed_gate", "[reach]") {
  CHECK(max_diff(composed_gate(1.0, 0.0, 0.0).matrix(), CMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_diff(composed_gate(0.8, 1.3, 0.0).matrix(), u0_oracle(0.4, 1.3)) < 1e-15);
  const CMatrix expected = u1_oracle(0.5, kPi / 2) * u0_oracle(0.5, kPi);
  CHECK(max_diff(composed_gate(1.0, kPi, kPi / 2).matrix(), expected) < 1e-15);
  CHECK(max_diff(composed_matrix(1.0, kPi, kPi / 2), expected) < 1e-15);

  CHECK_THROWS_AS(composed_gate(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(composed_gate(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("composed_gate is unitary", "[reach][property]") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const CMatrix u =
        composed_matrix(rng.uniform(1e-3, 20.0), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
    CHECK(max_diff(u.adjoint() * u, CMatrix::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("fidelity", "[reach]") {
  const auto zero = PureState::basis(2, 0);
  CHECK(fidelity(zero, zero) == 1.0);
  CHECK(fidelity(zero, PureState::basis(2, 1)) == 0.0);
  CHECK_THAT(fidelity(PureState(vec({0.6, 0.8})), zero), WithinAbs(0.36, 1e-15));
  CHECK_THROWS_AS(fidelity(zero, PureState::basis(3, 0)), std::invalid_argument);
}

TEST_CASE("gate families clamp their parameters", "[reach]") {
  const auto fam = GateFamily::restricted(kPrintedThetaMax);
  const CMatrix clamped = fam.gate(2.0, 4.0).matrix();
  CHECK(max_diff(clamped, restricted_gate(kPi / 2, std::nextafter(kPi, 0.0)).matrix()) == 0.0);
  CHECK(max_diff(fam.gate(-1.0, -1.0).matrix(), CMatrix::Identity(2, 2)) == 0.0);

  const auto nmr = GateFamily::nmr();
  CHECK(max_diff(nmr.gate(9.0, -2.0, 1.0).matrix(), composed_gate(1.0, 2 * kPi, 0.0).matrix()) == 0.0);
}

TEST_CASE("restricted family coverage", "[reach]") {
  const PureState equator(vec({kS, kS}));
  const SphereGrid grid{32, 64};
  const auto fam = GateFamily::restricted();

  const double unitary = reachable_set_coverage(equator, fam, false, grid);
  const double kraus = reachable_set_coverage(equator, fam, true, grid);
  CHECK_THAT(unitary, WithinAbs(0.5, 0.05));
  CHECK(kraus >= 0.95);
  CHECK_THAT(unitary, WithinAbs(coverage_oracle(kPi, false, 900), 0.02));
  CHECK_THAT(kraus, WithinAbs(coverage_oracle(kPi, true, 900), 0.02));

  // Any equator phase gives the same fractions.
  const PureState tilted(vec({kS, std::polar(kS, 1.1)}));
  CHECK_THAT(reachable_set_coverage(tilted, fam, false, grid), WithinAbs(unitary, 0.02));
}

TEST_CASE("coverage under the printed theta bound", "[reach]") {
  // theta <= pi/2 with the half-angle matrix reaches a quarter of the sphere
  // by unitaries and half of it through the Kraus branches.
  const PureState equator(vec({kS, kS}));
  const auto fam = GateFamily::restricted(kPrintedThetaMax);
  const double unitary = reachable_set_coverage(equator, fam, false, {});
  const double kraus = reachable_set_coverage(equator, fam, true, {});
  CHECK_THAT(unitary, WithinAbs(coverage_oracle(kPi / 2, false, 900), 0.02));
  CHECK_THAT(kraus, WithinAbs(coverage_oracle(kPi / 2, true, 900), 0.02));
  CHECK(unitary < 0.35);
  CHECK(kraus > 1.5 * unitary);
}

TEST_CASE("coverage edge cases", "[reach]") {
  const PureState equator(vec({kS, kS}));
  CHECK(reachable_set_coverage(equator, GateFamily::restricted(), false, {1, 1}) == 1.0);
  CHECK(reachable_set_coverage(equator, GateFamily::restricted(), true, {1, 1}) == 1.0);
  CHECK_THROWS_AS(reachable_set_coverage(PureState::basis(2, 0), GateFamily::restricted(), false, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(reachable_set_coverage(equator, GateFamily::restricted(), false, {0, 4}),
                  std::invalid_argument);
}

TEST_CASE("Z extends the Hadamard-reachable set", "[reach]") {
  const auto h = UnitaryGate::hadamard();
  const auto z = UnitaryGate::pauli_z();
  const std::vector<UnitaryGate> only_h{h};
  const std::vector<UnitaryGate> h_and_z{h, z};
  for (const auto& start : {PureState::basis(2, 0), PureState(vec({0.6, 0.8}))}) {
    const auto small = enumerate_reachable(start, only_h, 4);
    const auto large = enumerate_reachable(start, h_and_z, 4);
    CHECK(small.size() == 2);
    CHECK(large.size() > small.size());
    for (const auto& s : small) {
      const bool inside = std::any_of(large.begin(), large.end(), [&](const PureState& l) {
        return phase_distance(l.amplitudes(), s.amplitudes()) < 1e-9;
      });
      CHECK(inside);
    }
  }
  // From |0>: {|0>, |+>, |->, |1>}.
  CHECK(enumerate_reachable(PureState::basis(2, 0), h_and_z, 4).size() == 4);
}

TEST_CASE("nelder_mead minimizes a bowl", "[reach]") {
  const auto f = [](const std::array<double, 2>& p) {
    return (p[0] - 1.0) * (p[0] - 1.0) + 3 * (p[1] + 0.5) * (p[1] + 0.5);
  };
  const auto r = nelder_mead<2>(f, {4.0, 4.0}, 0.5, 400);
  CHECK_THAT(r.point[0], WithinAbs(1.0, 1e-6));
  CHECK_THAT(r.point[1], WithinAbs(-0.5, 1e-6));
  const auto none = nelder_mead<2>(f, {4.0, 4.0}, 0.5, 0);
  CHECK(none.value == f({4.0, 4.0}));
}

TEST_CASE("optimize_unitary examples", "[reach]") {
  const auto zero = PureState::basis(2, 0);
  const auto one = PureState::basis(2, 1);

  auto r = optimize_unitary({zero, zero, 1.0});
  CHECK(r.reached);
  CHECK(r.best_fidelity == 1.0);
  CHECK(r.omega == 0.0);
  CHECK(r.g == 0.0);
  CHECK(r.protocol == Protocol::Unitary);
  CHECK(r.branch_probability == 1.0);
  CHECK(r.net_success_probability == 1.0);

  // g T / 2 = pi / 2 lies on the grid for T = 1, g = pi.
  r = optimize_unitary({zero, one, 1.0});
  CHECK(r.reached);
  CHECK_THAT(r.best_fidelity, WithinAbs(1.0, 1e-12));
  CHECK_THAT(std::norm(std::sin(r.g / 2)), WithinAbs(1.0, 1e-6));

  // Tiny T: the gate is near identity.
  const PureState plus(vec({kS, kS}));
  r = optimize_unitary({zero, plus, 0.01});
  CHECK_FALSE(r.reached);
  CHECK(r.net_success_probability == 0.0);
  const double oracle = fidelity_oracle(zero.amplitudes(), plus.amplitudes(), 0.01, 400);
  CHECK(r.best_fidelity < 1 - 1e-3);
  CHECK_THAT(r.best_fidelity, WithinAbs(oracle, 1e-6));
}

TEST_CASE("optimize_unitary ignores global phases", "[reach][property]") {
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    const PureState a = haar_state(2, rng);
    const PureState b = haar_state(2, rng);
    const double t = rng.uniform(0.05, 1.0);
    const auto r1 = optimize_unitary({a, b, t});
    const auto r2 = optimize_unitary({PureState(a.amplitudes() * std::polar(1.0, 0.7)),
                                      PureState(b.amplitudes() * std::polar(1.0, -2.1)), t});
    CHECK_THAT(r1.best_fidelity, WithinAbs(r2.best_fidelity, 1e-9));
  }
}

TEST_CASE("optimize_remote examples", "[reach]") {
  const PureState plus(vec({kS, kS}));

  auto r = optimize_remote({plus, PureState::basis(2, 0), 1.0});
  CHECK(r.reached);
  CHECK(r.protocol == Protocol::Remote);
  REQUIRE(r.branch.has_value());
  CHECK_THAT(r.branch_probability, WithinAbs(0.5, 1e-12));
  CHECK(r.net_success_probability == r.branch_probability);

  // a = (1, 0): every branch collapses to |0>.
  TrialSpec blocked{PureState::basis(2, 0), PureState::basis(2, 1), 1.0};
  blocked.entanglement = RemoteEntanglement::FromInitial;
  r = optimize_remote(blocked);
  CHECK_FALSE(r.reached);
  CHECK(r.best_fidelity < 1e-12);
  CHECK(r.net_success_probability == 0.0);
  // The maximally entangled pair does not depend on the initial state.
  blocked.entanglement = RemoteEntanglement::Maximal;
  CHECK(optimize_remote(blocked).reached);

  // The Z-like branch of a Hadamard-type control gate.
  r = optimize_remote({plus, PureState(vec({kS, -kS})), 1.0});
  CHECK(r.reached);
  CHECK_THAT(r.branch_probability, WithinAbs(0.5, 1e-12));
}

TEST_CASE("remote pair construction", "[reach]") {
  const PureState t(vec({0.6, 0.8}));
  TrialSpec spec{t, t, 1.0};
  CHECK(max_diff(remote_pair(spec).schmidt_coefficients(), vec({kS, kS})) < 1e-15);
  spec.entanglement = RemoteEntanglement::FromInitial;
  CHECK(max_diff(remote_pair(spec).schmidt_coefficients(), vec({0.6, 0.8})) < 1e-15);
}

TEST_CASE("trial results are self-consistent", "[reach][property]") {
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    TrialSpec spec{haar_state(2, rng), haar_state(2, rng), rng.uniform(0.05, 3.0)};
    spec.epsilon = 0.02;
    if (i % 2) spec.entanglement = RemoteEntanglement::FromInitial;

    const auto u = optimize_unitary(spec);
    CHECK(u.reached == (u.best_fidelity >= 1 - spec.epsilon));
    CHECK(u.net_success_probability == (u.reached ? 1.0 : 0.0));
    const PureState moved(composed_gate(spec.final_time, u.omega, u.g).matrix() *
                          spec.initial.amplitudes());
    CHECK_THAT(fidelity(moved, spec.target), WithinAbs(u.best_fidelity, 1e-10));

    const auto r = optimize_remote(spec);
    CHECK(r.reached == (r.best_fidelity >= 1 - spec.epsilon));
    CHECK(r.net_success_probability == (r.reached ? r.branch_probability : 0.0));
    REQUIRE(r.branch.has_value());
    // Rebuild the reported branch from its parameters.
    const CMatrix gate = composed_gate(spec.final_time, r.omega, r.g).matrix();
    const CVector a = remote_pair(spec).schmidt_coefficients();
    const auto m = static_cast<Eigen::Index>(*r.branch);
    const CVector b = vec({gate(m, 0) * a[0], gate(m, 1) * a[1]});
    CHECK_THAT(b.squaredNorm(), WithinAbs(r.branch_probability, 1e-10));
    if (b.squaredNorm() > 1e-12) {
      CHECK_THAT(fidelity(PureState::normalized(b), spec.target), WithinAbs(r.best_fidelity, 1e-10));
    }
  }
}

TEST_CASE("finer grids never lose fidelity", "[reach][property]") {
  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    const PureState a = haar_state(2, rng);
    const PureState b = haar_state(2, rng);
    const double t = rng.uniform(0.05, 1.0);
    const auto objective = [&](double w, double g) {
      return fidelity(PureState(composed_matrix(t, w, g) * a.amplitudes()), b);
    };
    double previous = -1.0;
    for (std::size_t n : {8, 16, 32, 64}) {
      const double coarse = grid_search(objective, n).value;
      CHECK(coarse >= previous);
      previous = coarse;
      // Refinement starts from the grid optimum and never falls below it.
      const auto r = optimize_unitary({a, b, t}, {n, 200});
      CHECK(r.best_fidelity >= std::min(1.0, coarse));
      CHECK(r.best_fidelity >= optimize_unitary({a, b, t}, {n, 0}).best_fidelity);
    }
  }
}
