#pragma once

// Dense complex linear algebra for small quantum systems: pure states,
// density matrices, bipartite states, unitaries, partial traces and the
// Schmidt decomposition.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace remctl {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream oss;
  (oss << ... << std::forward<Args>(args));
  return oss.str();
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Rotates the global phase so the first amplitude whose magnitude exceeds
/// `zero_tol` is real and positive. Physical states are rays; this picks a
/// canonical representative.
inline CVector canonical_phase(const CVector& v, double zero_tol = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > zero_tol) {
      const Complex phase = std::conj(v[i]) / std::abs(v[i]);
      return v * phase;
    }
  }
  return v;
}

/// Largest entrywise deviation between two states compared as rays: b's
/// global phase is aligned to a through their overlap first.
inline double phase_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(
        detail::concat("phase_distance: size mismatch ", a.size(), " vs ", b.size()));
  }
  const Complex overlap = b.dot(a);  // <b|a>
  CVector aligned = b;
  if (std::abs(overlap) > 1e-300) aligned *= overlap / std::abs(overlap);
  return (a - aligned).cwiseAbs().maxCoeff();
}

class PureState {
 public:
  /// Takes amplitudes that are already unit norm (within 1e-12).
  explicit PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 2) {
      throw std::invalid_argument(
          detail::concat("PureState: dimension must be >= 2, got ", amps_.size()));
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("PureState: amplitudes not normalized (norm^2 = ", norm2, ")"));
    }
  }

  static PureState normalized(CVector raw) {
    const double n = raw.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("PureState: cannot normalize a zero vector");
    }
    raw /= n;
    return PureState(std::move(raw));
  }

  static PureState basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
      throw std::invalid_argument(
          detail::concat("PureState::basis: index ", index, " out of range for dim ", dim));
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

 private:
  CVector amps_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
      throw std::invalid_argument(detail::concat("DensityMatrix: matrix must be square, got ",
                                                 rho_.rows(), "x", rho_.cols()));
    }
    const double herm = detail::max_abs(rho_ - rho_.adjoint());
    if (herm > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("DensityMatrix: not Hermitian (deviation ", herm, ")"));
    }
    const Complex tr = rho_.trace();
    if (std::abs(tr - 1.0) > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("DensityMatrix: trace ", tr.real(), " differs from 1"));
    }
    const double lowest = eigenvalues().minCoeff();
    if (lowest < kEigenvalueFloor) {
      throw std::invalid_argument(
          detail::concat("DensityMatrix: negative eigenvalue ", lowest));
    }
  }

  static DensityMatrix from_pure(const PureState& psi) {
    const CVector& v = psi.amplitudes();
    return DensityMatrix(v * v.adjoint());
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim));
  }

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& entries() const { return rho_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const {
    // Symmetrize to remove roundoff asymmetry before the Hermitian solver.
    const CMatrix sym = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

 private:
  CMatrix rho_;
};

/// Amplitudes over |e_i^A>|e_j^B>, row-major: index i * dimB + j.
class BipartiteState {
 public:
  BipartiteState(std::size_t dim_a, std::size_t dim_b, CVector amplitudes)
      : dim_a_(dim_a), dim_b_(dim_b), amps_(std::move(amplitudes)) {
    if (dim_a < 1 || dim_b < 1 ||
        static_cast<std::size_t>(amps_.size()) != dim_a * dim_b) {
      throw std::invalid_argument(detail::concat("BipartiteState: dims ", dim_a, "x", dim_b,
                                                 " inconsistent with ", amps_.size(),
                                                 " amplitudes"));
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("BipartiteState: amplitudes not normalized (norm^2 = ", norm2, ")"));
    }
  }

  /// Builds from a dimA x dimB coefficient matrix M, where state = sum M_ij |i>|j>.
  static BipartiteState from_matrix(const CMatrix& m) {
    CVector v(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
    return BipartiteState(static_cast<std::size_t>(m.rows()),
                          static_cast<std::size_t>(m.cols()), std::move(v));
  }

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_b() const { return dim_b_; }
  const CVector& amplitudes() const { return amps_; }

  Complex amplitude(std::size_t i, std::size_t j) const {
    return amps_[static_cast<Eigen::Index>(i * dim_b_ + j)];
  }

  CMatrix as_matrix() const {
    CMatrix m(static_cast<Eigen::Index>(dim_a_), static_cast<Eigen::Index>(dim_b_));
    for (std::size_t i = 0; i < dim_a_; ++i)
      for (std::size_t j = 0; j < dim_b_; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = amplitude(i, j);
    return m;
  }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  CVector amps_;
};

class UnitaryGate {
 public:
  explicit UnitaryGate(CMatrix u) : u_(std::move(u)) {
    if (u_.rows() != u_.cols() || u_.rows() < 1) {
      throw std::invalid_argument(
          detail::concat("UnitaryGate: matrix must be square, got ", u_.rows(), "x", u_.cols()));
    }
    const auto n = u_.rows();
    const double dev = detail::max_abs(u_.adjoint() * u_ - CMatrix::Identity(n, n));
    if (dev > kNormTolerance) {
      throw std::invalid_argument(
          detail::concat("UnitaryGate: U^dagger U deviates from identity by ", dev));
    }
  }

  static UnitaryGate identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return UnitaryGate(CMatrix::Identity(n, n));
  }

  static UnitaryGate hadamard() {
    CMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return UnitaryGate(std::move(h));
  }

  static UnitaryGate pauli_x() {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return UnitaryGate(std::move(x));
  }

  static UnitaryGate pauli_z() {
    CMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return UnitaryGate(std::move(z));
  }

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return u_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  UnitaryGate adjoint() const { return UnitaryGate(u_.adjoint()); }

  friend UnitaryGate operator*(const UnitaryGate& lhs, const UnitaryGate& rhs) {
    if (lhs.dim() != rhs.dim()) {
      throw std::invalid_argument(
          detail::concat("UnitaryGate product: dims ", lhs.dim(), " and ", rhs.dim()));
    }
    return UnitaryGate(lhs.u_ * rhs.u_);
  }

 private:
  CMatrix u_;
};

enum class Subsystem { A, B };

inline BipartiteState tensor(const PureState& a, const PureState& b) {
  CVector v(static_cast<Eigen::Index>(a.dim() * b.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      v[static_cast<Eigen::Index>(i * b.dim() + j)] = a[i] * b[j];
  // Renormalize away the roundoff of the products.
  v /= v.norm();
  return BipartiteState(a.dim(), b.dim(), std::move(v));
}

/// Reduced density matrix of subsystem `keep` for an arbitrary multipartite
/// pure state stored row-major over `dims`.
inline CMatrix reduced_density(const CVector& amps, std::span<const std::size_t> dims,
                               std::size_t keep) {
  if (keep >= dims.size()) {
    throw std::invalid_argument(
        detail::concat("reduced_density: subsystem ", keep, " of ", dims.size()));
  }
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != static_cast<std::size_t>(amps.size())) {
    throw std::invalid_argument(detail::concat("reduced_density: dims product ", total,
                                               " vs ", amps.size(), " amplitudes"));
  }
  std::size_t inner = 1;
  for (std::size_t k = keep + 1; k < dims.size(); ++k) inner *= dims[k];
  const std::size_t d = dims[keep];
  const std::size_t outer = total / (inner * d);

  // View as (outer, d, inner) and contract over outer and inner.
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < inner; ++r) {
      for (std::size_t i = 0; i < d; ++i) {
        const Complex ai = amps[static_cast<Eigen::Index>((o * d + i) * inner + r)];
        if (ai == Complex{}) continue;
        for (std::size_t j = 0; j < d; ++j) {
          const Complex aj = amps[static_cast<Eigen::Index>((o * d + j) * inner + r)];
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ai * std::conj(aj);
        }
      }
    }
  }
  return rho;
}

inline DensityMatrix partial_trace(const BipartiteState& s, Subsystem keep) {
  const std::size_t dims[] = {s.dim_a(), s.dim_b()};
  CMatrix rho = reduced_density(s.amplitudes(), dims, keep == Subsystem::A ? 0 : 1);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

struct SchmidtDecomposition {
  std::vector<double> coefficients;  ///< descending, length min(dimA, dimB)
  std::vector<CVector> basis_a;
  std::vector<CVector> basis_b;

  CVector reconstruct() const {
    const auto da = basis_a.empty() ? 0 : basis_a.front().size();
    const auto db = basis_b.empty() ? 0 : basis_b.front().size();
    CVector v = CVector::Zero(da * db);
    for (std::size_t k = 0; k < coefficients.size(); ++k)
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < db; ++j)
          v[i * db + j] += coefficients[k] * basis_a[k][i] * basis_b[k][j];
    return v;
  }
};

namespace detail {

// Lexicographic "greater" on (real, imag) of the components.
inline bool lex_greater(const CVector& x, const CVector& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i].real() - y[i].real()) > 1e-12) return x[i].real() > y[i].real();
    if (std::abs(x[i].imag() - y[i].imag()) > 1e-12) return x[i].imag() > y[i].imag();
  }
  return false;
}

}  // namespace detail

/// Schmidt form via SVD of the reshaped dimA x dimB amplitude matrix.
/// Singular vectors are phase-canonicalized on the A side; ties in the
/// coefficients are ordered by the A-vector lexicographically.
inline SchmidtDecomposition schmidt_decompose(const BipartiteState& s) {
  const CMatrix m = s.as_matrix();
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();

  struct Term {
    double coeff;
    CVector a;
    CVector b;
  };
  std::vector<Term> terms;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    // M = U S V^dagger  =>  state = sum_k s_k |u_k> (x) |conj(v_k)>.
    CVector a = u.col(k);
    CVector b = v.col(k).conjugate();
    const CVector canon = canonical_phase(a);
    // Same phase factor moved to b keeps the product invariant.
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (std::abs(a[i]) > 1e-12) {
        const Complex phase = canon[i] / a[i];
        b /= phase;
        break;
      }
    }
    terms.push_back({sv[k], canon, b});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
    if (std::abs(x.coeff - y.coeff) > 1e-12) return x.coeff > y.coeff;
    return detail::lex_greater(x.a, y.a);
  });

  SchmidtDecomposition out;
  for (auto& t : terms) {
    out.coefficients.push_back(t.coeff);
    out.basis_a.push_back(std::move(t.a));
    out.basis_b.push_back(std::move(t.b));
  }
  return out;
}

inline std::size_t schmidt_number(const BipartiteState& s, double threshold) {
  if (threshold < 0.0 || threshold >= 1.0) {
    throw std::invalid_argument(
        detail::concat("schmidt_number: threshold ", threshold, " outside [0, 1)"));
  }
  const auto d = schmidt_decompose(s);
  return static_cast<std::size_t>(std::count_if(d.coefficients.begin(), d.coefficients.end(),
                                                [&](double c) { return c > threshold; }));
}

inline double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return (rho.entries() * rho.entries()).trace().real();
}

}  // namespace remctl
