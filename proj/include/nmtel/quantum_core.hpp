#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nmtel/types.hpp"

namespace nmtel {

// basis order everywhere: |1>=|ee>, |2>=|eg>, |3>=|ge>, |4>=|gg>

template <typename Real, int N>
void validate_density(const Eigen::Matrix<std::complex<Real>, N, N>& rho,
                      const std::string& what = "density matrix") {
  if (!rho.allFinite())
    throw std::invalid_argument(what + ": non-finite entries");
  const Real herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol)
    throw std::invalid_argument(what + ": not Hermitian (max asymmetry " + std::to_string(herm) + ")");
  const Real tr_err = std::abs(rho.trace() - std::complex<Real>(1));
  if (tr_err > kTraceTol)
    throw std::invalid_argument(what + ": trace deviates from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<Real>, N, N>> es(
      ((rho + rho.adjoint()) / Real(2)).eval(), Eigen::EigenvaluesOnly);
  const Real min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigFloor)
    throw std::invalid_argument(what + ": negative eigenvalue " + std::to_string(min_eig));
}

template <typename Real>
Vector4<Real> bell_state(BellIndex m) {
  require_bell_index(m);
  const Real r = Real(1) / std::sqrt(Real(2));
  Vector4<Real> v = Vector4<Real>::Zero();
  switch (m) {
    case 0: v(0) = r; v(3) = r; break;   // (|ee> + |gg>)/sqrt2
    case 1: v(1) = r; v(2) = r; break;   // (|eg> + |ge>)/sqrt2
    case 2: v(1) = r; v(2) = -r; break;  // (|eg> - |ge>)/sqrt2
    case 3: v(0) = r; v(3) = -r; break;  // (|ee> - |gg>)/sqrt2
  }
  return v;
}

template <typename Real>
Real bell_overlap(const Matrix4<Real>& rho, BellIndex m) {
  validate_density<Real, 4>(rho);
  const Vector4<Real> v = bell_state<Real>(m);
  return std::real(std::complex<Real>(v.adjoint() * rho * v));
}

template <typename Real>
Matrix2<Real> pauli(int j) {
  require_bell_index(j);  // same {0..3} range
  Matrix2<Real> s;
  const std::complex<Real> i(0, 1);
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

template <typename Real>
Matrix2<Real> pauli_conjugate(const Matrix2<Real>& rho_in, int j) {
  const Matrix2<Real> s = pauli<Real>(j);
  return s * rho_in * s;
}

template <typename Real>
Vector2<Real> state_vector(const InputState<Real>& psi) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr Real slack = 1e-9;
  if (!(psi.theta >= -slack && psi.theta <= pi + slack))
    throw std::invalid_argument("theta out of [0, pi]");
  if (!(psi.phi >= -slack && psi.phi <= 2 * pi + slack))
    throw std::invalid_argument("phi out of [0, 2pi)");
  Vector2<Real> v;
  v(0) = std::cos(psi.theta / 2);
  v(1) = std::polar(std::sin(psi.theta / 2), psi.phi);
  return v;
}

template <typename Real>
Real pure_state_fidelity(const InputState<Real>& psi, const Matrix2<Real>& rho) {
  validate_density<Real, 2>(rho, "output state");
  const Vector2<Real> v = state_vector(psi);
  return std::real(std::complex<Real>(v.adjoint() * rho * v));
}

// Kronecker product for the fixed small shapes used here
template <typename Real, int RA, int CA, int RB, int CB>
Eigen::Matrix<std::complex<Real>, RA * RB, CA * CB> kron(
    const Eigen::Matrix<std::complex<Real>, RA, CA>& a,
    const Eigen::Matrix<std::complex<Real>, RB, CB>& b) {
  Eigen::Matrix<std::complex<Real>, RA * RB, CA * CB> out;
  for (int i = 0; i < RA; ++i)
    for (int j = 0; j < CA; ++j)
      out.template block<RB, CB>(i * RB, j * CB) = a(i, j) * b;
  return out;
}

}  // namespace nmtel
