#pragma once

// Coherent-vector geometry for a qubit, normalized so that pure states sit
// at radius 1/sqrt(2):  v_k = 2^{-1/2} tr(rho sigma_k),  |v|^2 = tr(rho^2) - 1/2.

#include "remctl/protocol.hpp"
#include "remctl/qcore.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace remctl {

/// Coherent vectors shorter than this have no direction.
inline constexpr double kZeroVector = 1e-9;

struct CoherentVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double magnitude() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const CoherentVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline CoherentVector coherent_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw std::invalid_argument(
        detail::concat("coherent_vector: defined for N = 2, got N = ", rho.dim()));
  }
  const double s = 1.0 / std::sqrt(2.0);
  // tr(rho sx) = 2 Re rho_01, tr(rho sy) = -2 Im rho_01, tr(rho sz) = rho_00 - rho_11
  const Complex r01 = rho(0, 1);
  return {s * 2.0 * r01.real(), s * -2.0 * r01.imag(), s * (rho(0, 0) - rho(1, 1)).real()};
}

inline CoherentVector coherent_vector(const PureState& psi) {
  return coherent_vector(DensityMatrix::from_pure(psi));
}

inline double angle(const CoherentVector& u, const CoherentVector& w) {
  const double nu = u.magnitude();
  const double nw = w.magnitude();
  if (nu <= kZeroVector || nw <= kZeroVector) {
    throw std::domain_error("angle undefined for zero coherent vector");
  }
  // atan2(|u x w|, u . w) keeps full precision near 0 and pi, where acos
  // of the normalized dot product loses about half the digits.
  const double cx = u.y * w.z - u.z * w.y;
  const double cy = u.z * w.x - u.x * w.z;
  const double cz = u.x * w.y - u.y * w.x;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), u.dot(w));
}

/// Vectors of the three protocol stages plus the angle relations between them.
/// Branch labels 1 and 2 follow the geometry: label 1 is the outcome whose
/// control vector points along the pre-measurement target vector.
struct GeometryReport {
  CoherentVector control_pre;  ///< after entanglement and control unitary
  CoherentVector target_pre;   ///< after entanglement (unchanged by the unitary)
  CoherentVector control_entangled;
  std::array<CoherentVector, 2> control_branch;  ///< [label 1, label 2]
  std::array<CoherentVector, 2> target_branch;
  std::array<std::size_t, 2> branch_index;  ///< 0-based outcome for each label
  std::array<double, 2> branch_probability;

  double angle_c_t;      ///< angle(v^c, v^t)
  double angle_c_c1;     ///< angle(v^c, v_1^c)
  double angle_c_c2;     ///< angle(v^c, v_2^c)
  double angle_c1_t1;    ///< angle(v_1^c, v_1^t)
  double angle_t_t1;     ///< angle(v^t, v_1^t)
  double angle_c2_t2;    ///< angle(v_2^c, v_2^t)
  double angle_t_t2;     ///< angle(v^t, v_2^t)
  double angle_c1_c2;    ///< angle(v_1^c, v_2^c), always pi
  double angle_t1_t2;    ///< angle(v_1^t, v_2^t)

  /// |lhs - rhs| of the four angle equalities, in order.
  std::array<double, 4> residuals() const {
    return {std::abs(angle_c_t - angle_c_c1), std::abs(angle_c_t - (std::numbers::pi - angle_c_c2)),
            std::abs(angle_c1_t1 - angle_t_t1),
            std::abs(angle_c2_t2 - (std::numbers::pi - angle_t_t2))};
  }
};

/// Target coherent vectors for every possible branch of (a, U), indexed by
/// outcome. Impossible branches get a zero vector.
inline std::vector<CoherentVector> branch_target_vectors(const CVector& coeffs,
                                                         const UnitaryGate& u) {
  const EntangledPair pair = make_pair(coeffs);
  const auto branches = kraus_branches(u, pair);
  std::vector<CoherentVector> out;
  for (const auto& b : branches) {
    if (b.probability < kZeroProbability) {
      out.push_back({});
      continue;
    }
    out.push_back(coherent_vector(apply_kraus(b, pair.schmidt_coefficients())));
  }
  return out;
}

inline GeometryReport protocol_geometry_report(const CVector& coeffs, const UnitaryGate& u) {
  if (coeffs.size() != 2 || u.dim() != 2) {
    throw std::invalid_argument("protocol_geometry_report: defined for N = 2");
  }
  const EntangledPair pair = make_pair(coeffs);
  const CVector& a = pair.schmidt_coefficients();
  if (std::abs(std::norm(a[0]) - std::norm(a[1])) < 1e-12) {
    throw std::domain_error("angles undefined: coherent vectors vanish");
  }

  GeometryReport r{};
  const BipartiteState steered = apply_control_unitary(pair, u);
  r.control_entangled = coherent_vector(partial_trace(pair.state(), Subsystem::B));
  r.target_pre = coherent_vector(partial_trace(steered, Subsystem::A));
  r.control_pre = coherent_vector(partial_trace(steered, Subsystem::B));

  std::array<MeasurementOutcome, 2> outcomes{
      measure_control(steered, std::size_t{0}), measure_control(steered, std::size_t{1})};
  // Label 1: control outcome parallel to v^t.
  const CoherentVector c0 = coherent_vector(outcomes[0].control);
  const std::size_t first = c0.dot(r.target_pre) > 0.0 ? 0 : 1;
  r.branch_index = {first, 1 - first};
  for (std::size_t label = 0; label < 2; ++label) {
    const auto& o = outcomes[r.branch_index[label]];
    if (o.probability < 1e-12) {
      throw std::domain_error("protocol_geometry_report: branch probability below 1e-12");
    }
    r.control_branch[label] = coherent_vector(o.control);
    r.target_branch[label] = coherent_vector(o.target);
    r.branch_probability[label] = o.probability;
  }

  const auto& vc = r.control_pre;
  const auto& vt = r.target_pre;
  const auto& [vc1, vc2] = r.control_branch;
  const auto& [vt1, vt2] = r.target_branch;
  r.angle_c_t = angle(vc, vt);
  r.angle_c_c1 = angle(vc, vc1);
  r.angle_c_c2 = angle(vc, vc2);
  r.angle_c1_t1 = angle(vc1, vt1);
  r.angle_t_t1 = angle(vt, vt1);
  r.angle_c2_t2 = angle(vc2, vt2);
  r.angle_t_t2 = angle(vt, vt2);
  r.angle_c1_c2 = angle(vc1, vc2);
  r.angle_t1_t2 = angle(vt1, vt2);
  return r;
}

struct TrajectoryPoint {
  std::string label;
  CoherentVector v;
};

/// Plot data for the three protocol stages, starting from the unentangled
/// target with amplitudes `coeffs` and the control in |e_0>.
inline std::vector<TrajectoryPoint> geometry_trajectory(const CVector& coeffs,
                                                        const GeometryReport& r) {
  const PureState initial = PureState::normalized(coeffs);
  std::vector<TrajectoryPoint> pts{
      {"target_initial", coherent_vector(initial)},
      {"control_initial", coherent_vector(PureState::basis(2, 0))},
      {"target_entangled", r.target_pre},
      {"control_entangled", r.control_entangled},
      {"control_steered", r.control_pre},
      {"target_steered", r.target_pre},
  };
  for (std::size_t label = 0; label < 2; ++label) {
    const std::string suffix = std::to_string(label + 1);
    pts.push_back({"control_branch" + suffix, r.control_branch[label]});
    pts.push_back({"target_branch" + suffix, r.target_branch[label]});
  }
  return pts;
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// CSV: step_label,vx,vy,vz,magnitude
inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& pts) {
  os << "step_label,vx,vy,vz,magnitude\n";
  for (const auto& p : pts) {
    os << p.label << ',' << detail::fmt17(p.v.x) << ',' << detail::fmt17(p.v.y) << ','
       << detail::fmt17(p.v.z) << ',' << detail::fmt17(p.v.magnitude()) << '\n';
  }
}

}  // namespace remctl
