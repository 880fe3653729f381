#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nmtel/quantum_core.hpp"
#include "nmtel/types.hpp"

namespace nmtel {

template <typename Real>
struct TeleportProbabilities {
  BellIndex m = 0;            // Bell component the corrections are keyed to
  std::array<Real, 4> p{};    // p_j = <Psi^(j XOR m)| rho |Psi^(j XOR m)>
};

namespace detail {

template <typename Real>
std::array<Real, 4> bell_overlaps(const Matrix4<Real>& rho) {
  validate_density<Real, 4>(rho);
  std::array<Real, 4> q;
  for (BellIndex m = 0; m < 4; ++m) {
    const Vector4<Real> v = bell_state<Real>(m);
    q[m] = std::real(std::complex<Real>(v.adjoint() * rho * v));
  }
  return q;
}

}  // namespace detail

// mixture weights for a forced Bell component m
template <typename Real>
TeleportProbabilities<Real> probabilities(const Matrix4<Real>& rho, BellIndex m) {
  require_bell_index(m);
  const std::array<Real, 4> q = detail::bell_overlaps(rho);
  TeleportProbabilities<Real> tp;
  tp.m = m;
  for (BellIndex j = 0; j < 4; ++j) tp.p[j] = q[j ^ m];
  return tp;
}

// argmax choice of m (ties broken toward the smallest index)
template <typename Real>
TeleportProbabilities<Real> probabilities(const Matrix4<Real>& rho) {
  const std::array<Real, 4> q = detail::bell_overlaps(rho);
  BellIndex best = 0;
  for (BellIndex m = 1; m < 4; ++m)
    if (q[m] > q[best]) best = m;
  TeleportProbabilities<Real> tp;
  tp.m = best;
  for (BellIndex j = 0; j < 4; ++j) tp.p[j] = q[j ^ best];
  return tp;
}

template <typename Real>
Matrix2<Real> output_state(const TeleportProbabilities<Real>& probs, const InputState<Real>& psi) {
  const Vector2<Real> v = state_vector(psi);
  const Matrix2<Real> rho_in = v * v.adjoint();
  Matrix2<Real> out = Matrix2<Real>::Zero();
  for (int j = 0; j < 4; ++j) out += probs.p[j] * pauli_conjugate(rho_in, j);
  return out;
}

template <typename Real>
Real average_fidelity_optimized(const Matrix4<Real>& rho) {
  return Real(1) / 3 + Real(2) / 3 * probabilities(rho).p[0];
}

// fast paths for the two Bell channels; the overlap pipeline stays authoritative
template <typename Real>
Real average_fidelity_closed_phi(const Complex<Real>& g) {
  const Real x = std::norm(g);
  return (2 + x * x) / 3;  // exact when g^2 is real (e.g. zero detuning)
}

template <typename Real>
Real average_fidelity_closed_psi(const Complex<Real>& g) {
  const Real x = std::norm(g);
  return Real(1) / 3 + std::max(1 - x, 2 * x) / 3;  // branch switch at x = 1/3
}

template <typename Real>
Real minimal_fidelity_closed_phi(const Complex<Real>& g) {
  return Real(0.5) + std::real(g * g) / 2;  // equatorial worst case, m = 0
}

template <typename Real>
Real minimal_fidelity_closed_psi(const Complex<Real>& g) {
  return std::norm(g);  // polar worst case, m = 1
}

// pointwise fidelity F(theta,phi) = sum_j p_j |<psi|sigma_j|psi>|^2
//                                 = p0 + p1 nx^2 + p2 ny^2 + p3 nz^2
namespace detail {

template <typename Real>
Real pointwise_fidelity(const TeleportProbabilities<Real>& probs, Real theta, Real phi) {
  const Real st = std::sin(theta);
  const Real nx = st * std::cos(phi), ny = st * std::sin(phi), nz = std::cos(theta);
  return probs.p[0] + probs.p[1] * nx * nx + probs.p[2] * ny * ny + probs.p[3] * nz * nz;
}

}  // namespace detail

template <typename Real>
Real pointwise_fidelity(const TeleportProbabilities<Real>& probs, const InputState<Real>& psi) {
  state_vector(psi);  // range check
  return detail::pointwise_fidelity(probs, psi.theta, psi.phi);
}

// exact minimum of the quadratic form over the Bloch sphere: the extremes of
// (nx^2, ny^2, nz^2) are the coordinate axes, so min F = p0 + min(p1, p2, p3)
template <typename Real>
Real minimal_fidelity_exact(const TeleportProbabilities<Real>& probs) {
  return probs.p[0] + std::min({probs.p[1], probs.p[2], probs.p[3]});
}

// worst-case fidelity by exhaustive (theta, phi) grid scan, m by argmax
template <typename Real>
Real minimal_fidelity(const Matrix4<Real>& rho, int n_theta, int n_phi) {
  if (n_theta < 181 || n_phi < 361)
    throw std::invalid_argument("grid must be at least 181 x 361");
  const TeleportProbabilities<Real> probs = probabilities(rho);
  constexpr Real pi = std::numbers::pi_v<Real>;
  Real best = 2;
  for (int i = 0; i < n_theta; ++i) {
    const Real theta = pi * Real(i) / Real(n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const Real phi = 2 * pi * Real(j) / Real(n_phi - 1);
      best = std::min(best, detail::pointwise_fidelity(probs, theta, phi));
    }
  }
  return best;
}

template <typename Real>
struct TraceSample {
  Real t;
  Real value;
  BellIndex m;
};

template <typename Real>
struct FidelityTrace {
  std::vector<TraceSample<Real>> samples;
  bool has_m = true;  // false for bare G traces
};

}  // namespace nmtel
