#pragma once

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "operator_matrix.hpp"

namespace fockcalc {

/// Segal field Phi_S(U) = (a(U) + a*(U))/sqrt(2), with U = (u_q, u_p) read as u_q + i u_p.
inline OperatorMatrix segal_field(const PhasePoint& U, const TruncationSpec& spec) {
  if (U.modes() != spec.modes) throw std::invalid_argument("segal_field: mode count mismatch");
  OperatorMatrix r(spec);
  for (std::size_t j = 0; j < spec.modes; ++j) {
    const Complex u = U.z(j);
    if (u == Complex{}) continue;
    const OperatorMatrix c = creation_matrix(j, spec);
    r.matrix() += (u * c.matrix() + std::conj(u) * c.matrix().adjoint()) / std::sqrt(2.0);
  }
  return r;
}

/// exp(i Phi_S(U)).
inline OperatorMatrix segal_exponential(const PhasePoint& U, const TruncationSpec& spec) {
  const OperatorMatrix phi = segal_field(U, spec);
  return {spec, (Complex(0, 1) * phi.matrix()).exp()};
}

/// V_h(X) = exp(-(i/sqrt h) Phi_S(X^)), X^ = (-p, q).
inline OperatorMatrix displacement(const PhasePoint& X, double h, const TruncationSpec& spec) {
  if (!(h > 0.0)) throw std::domain_error("displacement: h must be positive");
  const PhasePoint hat(
      [&] {
        std::vector<double> v(X.p);
        for (auto& x : v) x = -x;
        return v;
      }(),
      X.q);
  return segal_exponential(hat * (-1.0 / std::sqrt(h)), spec);
}

}  // namespace fockcalc
