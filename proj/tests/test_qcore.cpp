#include <catch2/catch_amalgamated.hpp>

#include "remctl/qcore.hpp"
#include "remctl/random.hpp"

#include "test_support.hpp"

using namespace remctl;
using Catch::Matchers::WithinAbs;
using remctl::testing::vec;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

BipartiteState bell() { return BipartiteState(2, 2, vec({kS, 0, 0, kS})); }

// Explicit double-sum partial trace over B: rho_ik = sum_j psi_ij conj(psi_kj).
CMatrix partial_trace_oracle(const BipartiteState& s) {
  CMatrix rho = CMatrix::Zero(s.dim_a(), s.dim_a());
  for (std::size_t i = 0; i < s.dim_a(); ++i)
    for (std::size_t k = 0; k < s.dim_a(); ++k)
      for (std::size_t j = 0; j < s.dim_b(); ++j)
        rho(i, k) += s.amplitude(i, j) * std::conj(s.amplitude(k, j));
  return rho;
}

}  // namespace

TEST_CASE("tensor of basis and superposed states", "[qcore]") {
  const auto zero = PureState::basis(2, 0);
  const auto one = PureState::basis(2, 1);
  CHECK(testing::max_diff(tensor(zero, zero).amplitudes(), vec({1, 0, 0, 0})) == 0.0);
  CHECK(testing::max_diff(tensor(zero, one).amplitudes(), vec({0, 1, 0, 0})) == 0.0);

  const PureState a(vec({0.6, 0.8}));
  const PureState b(vec({kS, kS}));
  const auto ab = tensor(a, b);
  CHECK(testing::max_diff(ab.amplitudes(), vec({0.6 * kS, 0.6 * kS, 0.8 * kS, 0.8 * kS})) < 1e-15);
}

TEST_CASE("partial trace examples", "[qcore]") {
  const auto rb = partial_trace(bell(), Subsystem::A);
  CHECK(testing::max_diff(rb.entries(), testing::diag({0.5, 0.5})) < 1e-15);

  const auto prod = tensor(PureState::basis(2, 0), PureState::basis(2, 1));
  CHECK(testing::max_diff(partial_trace(prod, Subsystem::A).entries(), testing::diag({1, 0})) == 0.0);

  const BipartiteState schmidt(2, 2, vec({0.6, 0, 0, 0.8}));
  const CMatrix oracle = partial_trace_oracle(schmidt);
  CHECK(testing::max_diff(oracle, testing::diag({0.36, 0.64})) < 1e-15);
  CHECK(testing::max_diff(partial_trace(schmidt, Subsystem::A).entries(), oracle) < 1e-15);
}

TEST_CASE("partial trace rejects inconsistent dims", "[qcore]") {
  CHECK_THROWS_AS(BipartiteState(2, 3, vec({1, 0, 0, 0})), std::invalid_argument);
  const std::size_t dims[] = {2, 3};
  CHECK_THROWS_WITH(reduced_density(vec({1, 0, 0, 0}), dims, 0),
                    Catch::Matchers::ContainsSubstring("6") &&
                        Catch::Matchers::ContainsSubstring("4"));
}

TEST_CASE("Schmidt decomposition examples", "[qcore]") {
  auto d = schmidt_decompose(bell());
  REQUIRE(d.coefficients.size() == 2);
  CHECK_THAT(d.coefficients[0], WithinAbs(kS, 1e-15));
  CHECK_THAT(d.coefficients[1], WithinAbs(kS, 1e-15));

  d = schmidt_decompose(tensor(PureState::basis(2, 0), PureState::basis(2, 1)));
  CHECK_THAT(d.coefficients[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(d.coefficients[1], WithinAbs(0.0, 1e-15));

  const BipartiteState schmidt(2, 2, vec({0.6, 0, 0, 0.8}));
  d = schmidt_decompose(schmidt);
  CHECK_THAT(d.coefficients[0], WithinAbs(0.8, 1e-15));
  CHECK_THAT(d.coefficients[1], WithinAbs(0.6, 1e-15));
  CHECK(testing::max_diff(d.reconstruct(), schmidt.amplitudes()) < 1e-14);
}

TEST_CASE("Schmidt number", "[qcore]") {
  CHECK(schmidt_number(bell(), 1e-10) == 2);
  CHECK(schmidt_number(tensor(PureState::basis(2, 0), PureState::basis(2, 0)), 1e-10) == 1);
  CHECK(schmidt_number(BipartiteState(2, 2, vec({0.6, 0, 0, 0.8})), 1e-10) == 2);
  CHECK_THROWS_AS(schmidt_number(bell(), 1.0), std::invalid_argument);
}

TEST_CASE("purity examples", "[qcore]") {
  CHECK_THAT(purity(DensityMatrix::from_pure(PureState::basis(2, 0))), WithinAbs(1.0, 1e-15));
  CHECK_THAT(purity(DensityMatrix::maximally_mixed(2)), WithinAbs(0.5, 1e-15));
  // 0.36^2 + 0.64^2
  CHECK_THAT(purity(DensityMatrix(testing::diag({0.36, 0.64}))), WithinAbs(0.5392, 1e-15));
}

TEST_CASE("type invariants are enforced", "[qcore]") {
  CHECK_THROWS_AS(PureState(vec({1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(PureState(vec({1})), std::invalid_argument);
  CHECK_THROWS_AS(PureState::normalized(vec({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(testing::diag({1.5, -0.5})), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(testing::diag({0.5, 0.6})), std::invalid_argument);
  CMatrix nonherm = testing::diag({0.5, 0.5});
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(nonherm), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryGate(testing::diag({1, 2})), std::invalid_argument);
}

TEST_CASE("canonical phase makes first nonzero amplitude real positive", "[qcore]") {
  const CVector v = vec({0, Complex(0, -0.6), 0.8});
  const CVector c = canonical_phase(v);
  CHECK(c[1].real() > 0);
  CHECK(std::abs(c[1].imag()) < 1e-16);
  CHECK(phase_distance(v, c) < 1e-15);
  CHECK(phase_distance(v, vec({0, 0.6, 0.8})) > 0.1);
}

TEST_CASE("product states stay pure under partial trace", "[qcore][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t na = 2 + trial % 3;
    const std::size_t nb = 2 + (trial / 3) % 3;
    const auto s = tensor(haar_state(na, rng), haar_state(nb, rng));
    CHECK_THAT(purity(partial_trace(s, Subsystem::A)), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("Schmidt reconstruction on random bipartite states", "[qcore][property]") {
  Rng rng(12);
  double worst = 0.0;
  double worst_norm = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t na = 2 + trial % 3;
    const std::size_t nb = 2 + (trial / 3) % 3;
    const auto psi = haar_state(na * nb, rng);
    const BipartiteState s(na, nb, psi.amplitudes());
    const auto d = schmidt_decompose(s);
    double sum2 = 0.0;
    for (std::size_t k = 0; k < d.coefficients.size(); ++k) {
      sum2 += d.coefficients[k] * d.coefficients[k];
      if (k > 0) REQUIRE(d.coefficients[k] <= d.coefficients[k - 1] + 1e-12);
    }
    worst_norm = std::max(worst_norm, std::abs(sum2 - 1.0));
    worst = std::max(worst, phase_distance(s.amplitudes(), d.reconstruct()));
  }
  CHECK(worst < 1e-10);
  CHECK(worst_norm < 1e-10);
}

TEST_CASE("reduced spectra of a Schmidt-form state agree", "[qcore][property]") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto a = haar_state(n, rng);
    CVector amps = CVector::Zero(n * n);
    for (std::size_t i = 0; i < n; ++i) amps[i * n + i] = a[i];
    const BipartiteState s(n, n, amps);
    const auto ea = partial_trace(s, Subsystem::A).eigenvalues();
    const auto eb = partial_trace(s, Subsystem::B).eigenvalues();
    CHECK((ea - eb).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("purity is invariant under unitary conjugation", "[qcore][property]") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto rho = random_density(n, rng);
    const auto u = haar_unitary(n, rng);
    CMatrix r2 = u.matrix() * rho.entries() * u.matrix().adjoint();
    r2 = 0.5 * (r2 + r2.adjoint());
    CHECK_THAT(purity(DensityMatrix(r2)), WithinAbs(purity(rho), 1e-12));
  }
}
