#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nmtel {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Vector2 = Eigen::Matrix<std::complex<Real>, 2, 1>;
template <typename Real>
using Vector4 = Eigen::Matrix<std::complex<Real>, 4, 1>;
template <typename Real>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Matrix4 = Eigen::Matrix<std::complex<Real>, 4, 4>;
template <typename Real>
using Matrix8 = Eigen::Matrix<std::complex<Real>, 8, 8>;

// density-matrix admission tolerances, shared by every API boundary check
inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigFloor = -1e-10;
// Kraus construction rejects amplitudes beyond this
inline constexpr double kAmpTol = 1e-9;

// Bell index m in {0,1,2,3}; composition j*m is XOR, the Klein-group law of
// the Pauli labels (sigma_j sigma_m is proportional to sigma_{j XOR m}).
using BellIndex = int;

inline void require_bell_index(BellIndex m) {
  if (m < 0 || m > 3)
    throw std::invalid_argument("bell index must be in {0,1,2,3}, got " + std::to_string(m));
}

inline BellIndex bell_compose(BellIndex j, BellIndex m) {
  require_bell_index(j);
  require_bell_index(m);
  return j ^ m;
}

// input qubit cos(theta/2)|e> + sin(theta/2) e^{i phi}|g>
template <typename Real>
struct InputState {
  Real theta;  // polar, [0, pi]
  Real phi;    // azimuthal, [0, 2pi)
};

}  // namespace nmtel
