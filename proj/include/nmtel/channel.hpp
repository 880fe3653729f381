#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "nmtel/quantum_core.hpp"
#include "nmtel/types.hpp"

namespace nmtel {

template <typename Real>
struct KrausPair {
  Matrix2<Real> k0, k1;
};

// amplitude damping with coherence factor g, basis (|e>,|g>):
//   K0 = [[g, 0], [0, 1]],  K1 = [[0, 0], [sqrt(1-|g|^2), 0]]
template <typename Real>
KrausPair<Real> single_qubit_kraus(const Complex<Real>& g) {
  const Real mag = std::abs(g);
  if (!(mag <= 1 + Real(kAmpTol)))
    throw std::invalid_argument("|g| must be <= 1, got " + std::to_string(mag));
  KrausPair<Real> kp;
  kp.k0 << g, 0, 0, 1;
  kp.k1 << 0, 0, std::sqrt(std::max(Real(0), 1 - mag * mag)), 0;
  return kp;
}

template <typename Real>
struct InitialChannel {
  enum class Kind { BellPhi, BellPsi, Custom };
  Kind kind = Kind::BellPhi;
  BellIndex m = 0;            // dominant Bell component; fixed 0/3 for phi, 1/2 for psi
  Matrix4<Real> custom{};     // only meaningful for Kind::Custom

  static InitialChannel bell_phi(BellIndex m = 0) {
    if (m != 0 && m != 3) throw std::invalid_argument("phi-type index must be 0 or 3");
    return {Kind::BellPhi, m, Matrix4<Real>::Zero()};
  }
  static InitialChannel bell_psi(BellIndex m = 1) {
    if (m != 1 && m != 2) throw std::invalid_argument("psi-type index must be 1 or 2");
    return {Kind::BellPsi, m, Matrix4<Real>::Zero()};
  }
  static InitialChannel custom_state(const Matrix4<Real>& rho) {
    validate_density<Real, 4>(rho, "custom initial state");
    return {Kind::Custom, -1, rho};
  }

  Matrix4<Real> initial_rho() const {
    if (kind == Kind::Custom) return custom;
    const Vector4<Real> v = bell_state<Real>(m);
    return v * v.adjoint();
  }
};

// one-shot evolution from t=0: rho(t) = sum_ij (Ki x Kj) rho0 (Ki x Kj)^dag.
// The map family is not a semigroup away from the flat-spectrum limit, so
// there is deliberately no incremental/compose entry point.
template <typename Real>
Matrix4<Real> evolve(const InitialChannel<Real>& init, const Complex<Real>& g) {
  const KrausPair<Real> kp = single_qubit_kraus(g);
  const Matrix4<Real> rho0 = init.initial_rho();
  const std::array<const Matrix2<Real>*, 2> ks{&kp.k0, &kp.k1};
  Matrix4<Real> rho = Matrix4<Real>::Zero();
  for (const auto* ki : ks)
    for (const auto* kj : ks) {
      const Matrix4<Real> kij = kron<Real, 2, 2, 2, 2>(*ki, *kj);
      rho += kij * rho0 * kij.adjoint();
    }
  return rho;
}

// the six element updates stated for the closed-form map, x = |g|^2:
//   r11 -> r11 x^2;  r22 -> r11 x(1-x) + r22 x;  r33 likewise;  r44 by trace;
//   r14 -> r14 g^2;  r23 -> r23 x
template <typename Real>
struct ClosedFormElements {
  Complex<Real> r11, r22, r33, r44, r14, r23;
};

template <typename Real>
ClosedFormElements<Real> evolve_closed_form(const InitialChannel<Real>& init,
                                            const Complex<Real>& g) {
  const Real mag = std::abs(g);
  if (!(mag <= 1 + Real(kAmpTol)))
    throw std::invalid_argument("|g| must be <= 1, got " + std::to_string(mag));
  const Matrix4<Real> r0 = init.initial_rho();
  const Real x = mag * mag;
  ClosedFormElements<Real> e;
  e.r11 = r0(0, 0) * x * x;
  e.r22 = r0(0, 0) * x * (1 - x) + r0(1, 1) * x;
  e.r33 = r0(0, 0) * x * (1 - x) + r0(2, 2) * x;
  e.r44 = Real(1) - e.r11 - e.r22 - e.r33;
  e.r14 = r0(0, 3) * g * g;
  e.r23 = r0(1, 2) * x;
  return e;
}

}  // namespace nmtel
