#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "nmtel/quantum_core.hpp"
#include "nmtel/teleport.hpp"
#include "nmtel/types.hpp"

namespace nmtel::oracle {

struct QuadratureSpec {
  enum class Rule { Midpoint, GaussLegendreCosTheta };
  int n_theta = 64;
  int n_phi = 128;
  Rule rule = Rule::GaussLegendreCosTheta;
};

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n
template <typename Real>
std::vector<std::pair<Real, Real>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
  constexpr Real pi = std::numbers::pi_v<Real>;
  std::vector<std::pair<Real, Real>> nw(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < Real(1e-15)) break;
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    nw[i] = {-x, w};          // nodes come out descending; store ascending
    nw[n - 1 - i] = {x, w};
  }
  return nw;
}

// (theta, phi, weight) covering the sphere; weights sum to 4*pi
template <typename Real>
std::vector<std::array<Real, 3>> sphere_nodes(const QuadratureSpec& spec) {
  if (spec.n_theta < 1 || spec.n_phi < 1) throw std::invalid_argument("resolution must be positive");
  constexpr Real pi = std::numbers::pi_v<Real>;
  std::vector<std::pair<Real, Real>> colat;  // (cos theta, weight)
  if (spec.rule == QuadratureSpec::Rule::GaussLegendreCosTheta) {
    colat = gauss_legendre<Real>(spec.n_theta);
  } else {
    for (int i = 0; i < spec.n_theta; ++i)
      colat.emplace_back(-1 + (2 * Real(i) + 1) / Real(spec.n_theta), Real(2) / spec.n_theta);
  }
  std::vector<std::array<Real, 3>> nodes;
  nodes.reserve(std::size_t(spec.n_theta) * std::size_t(spec.n_phi));
  const Real wphi = 2 * pi / Real(spec.n_phi);
  for (const auto& [u, wu] : colat) {
    const Real theta = std::acos(std::clamp(u, Real(-1), Real(1)));
    for (int j = 0; j < spec.n_phi; ++j)
      nodes.push_back({theta, wphi * Real(j), wu * wphi});
  }
  return nodes;
}

// full three-qubit protocol: project (input, A) onto each Bell state, apply
// sigma_{k XOR m} to B, sum the corrected branches. Qubit order (in, A, B),
// B least significant.
template <typename Real>
Matrix2<Real> protocol_simulate(const Matrix4<Real>& rho_c, const InputState<Real>& psi,
                                BellIndex m) {
  require_bell_index(m);
  validate_density<Real, 4>(rho_c, "channel state");
  const Vector2<Real> v = state_vector(psi);
  const Matrix2<Real> rho_in = v * v.adjoint();
  const Matrix8<Real> rho3 = kron<Real, 2, 2, 4, 4>(rho_in, rho_c);
  Matrix2<Real> out = Matrix2<Real>::Zero();
  for (BellIndex k = 0; k < 4; ++k) {
    const Vector4<Real> b = bell_state<Real>(k);
    const Matrix4<Real> proj = b * b.adjoint();
    const Matrix8<Real> meas = kron<Real, 4, 4, 2, 2>(proj, Matrix2<Real>::Identity());
    const Matrix8<Real> cond = meas * rho3 * meas.adjoint();
    Matrix2<Real> rho_b = Matrix2<Real>::Zero();  // trace out (in, A)
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) rho_b(r, s) += cond(2 * c + r, 2 * c + s);
    out += pauli_conjugate(rho_b, k ^ m);
  }
  return out;
}

// sphere average of pointwise fidelity with the output state assembled
// explicitly per node (checks the 1/3 + 2/3 p0 closed form end to end)
template <typename Real>
Real average_fidelity_quadrature(const Matrix4<Real>& rho_c, BellIndex m,
                                 const QuadratureSpec& spec) {
  const TeleportProbabilities<Real> probs = probabilities(rho_c, m);
  constexpr Real pi = std::numbers::pi_v<Real>;
  Real acc = 0;
  for (const auto& [theta, phi, w] : sphere_nodes<Real>(spec)) {
    const InputState<Real> psi{theta, phi};
    acc += w * pure_state_fidelity(psi, output_state(probs, psi).eval());
  }
  return acc / (4 * pi);
}

namespace detail {

// Nelder-Mead on (theta, phi); the objective extends periodically so the
// simplex may roam freely
template <typename Real, typename F>
std::pair<std::array<Real, 2>, Real> nelder_mead(F f, std::array<Real, 2> x0, Real scale,
                                                 Real tol, int max_iter) {
  std::array<std::array<Real, 2>, 3> xs{x0,
                                        {x0[0] + scale, x0[1]},
                                        {x0[0], x0[1] + scale}};
  std::array<Real, 3> fs{f(xs[0]), f(xs[1]), f(xs[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const auto &xb = xs[ord[0]], &xw = xs[ord[2]];
    const Real fb = fs[ord[0]], fsecond = fs[ord[1]], fw = fs[ord[2]];
    Real spread = 0;
    for (int k = 0; k < 2; ++k) spread = std::max(spread, std::abs(xw[k] - xb[k]));
    if (spread < tol && fw - fb < tol) break;
    const std::array<Real, 2> c{(xb[0] + xs[ord[1]][0]) / 2, (xb[1] + xs[ord[1]][1]) / 2};
    auto blend = [&](Real a) {
      return std::array<Real, 2>{c[0] + a * (c[0] - xw[0]), c[1] + a * (c[1] - xw[1])};
    };
    const auto xr = blend(Real(1));
    const Real fr = f(xr);
    if (fr < fb) {
      const auto xe = blend(Real(2));
      const Real fe = f(xe);
      if (fe < fr) { xs[ord[2]] = xe; fs[ord[2]] = fe; }
      else { xs[ord[2]] = xr; fs[ord[2]] = fr; }
    } else if (fr < fsecond) {
      xs[ord[2]] = xr;
      fs[ord[2]] = fr;
    } else {
      const auto xc = blend(Real(-0.5));
      const Real fc = f(xc);
      if (fc < fw) { xs[ord[2]] = xc; fs[ord[2]] = fc; }
      else {
        for (int k : {ord[1], ord[2]}) {
          for (int d = 0; d < 2; ++d) xs[k][d] = xb[d] + (xs[k][d] - xb[d]) / 2;
          fs[k] = f(xs[k]);
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (fs[k] < fs[best]) best = k;
  return {xs[best], fs[best]};
}

}  // namespace detail

// grid scan plus one local refinement from the best point
template <typename Real>
Real minimal_fidelity_bruteforce(const Matrix4<Real>& rho_c, BellIndex m,
                                 const QuadratureSpec& spec) {
  const TeleportProbabilities<Real> probs = probabilities(rho_c, m);
  constexpr Real pi = std::numbers::pi_v<Real>;
  const int nt = std::max(spec.n_theta, 2), np = std::max(spec.n_phi, 2);
  Real best = 2;
  std::array<Real, 2> arg{0, 0};
  for (int i = 0; i < nt; ++i) {
    const Real theta = pi * Real(i) / Real(nt - 1);
    for (int j = 0; j < np; ++j) {
      const Real phi = 2 * pi * Real(j) / Real(np - 1);
      const Real f = nmtel::detail::pointwise_fidelity(probs, theta, phi);
      if (f < best) {
        best = f;
        arg = {theta, phi};
      }
    }
  }
  auto obj = [&](const std::array<Real, 2>& x) {
    return nmtel::detail::pointwise_fidelity(probs, x[0], x[1]);
  };
  const auto [xmin, fmin] =
      detail::nelder_mead<Real>(obj, arg, pi / Real(nt - 1), Real(1e-8), 300);
  return std::min(best, fmin);
}

// random physical inputs for property tests (Ginibre density matrices)
template <typename Real, int N>
Eigen::Matrix<std::complex<Real>, N, N> random_density_matrix(std::mt19937_64& rng) {
  std::normal_distribution<Real> gauss(0, 1);
  Eigen::Matrix<std::complex<Real>, N, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = std::complex<Real>(gauss(rng), gauss(rng));
  Eigen::Matrix<std::complex<Real>, N, N> rho = a * a.adjoint();
  rho /= rho.trace();
  return (rho + rho.adjoint()).eval() / Real(2);
}

template <typename Real>
InputState<Real> random_input_state(std::mt19937_64& rng) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  std::uniform_real_distribution<Real> uni(0, 1);
  return {std::acos(1 - 2 * uni(rng)), 2 * pi * uni(rng)};
}

template <typename Real>
Complex<Real> random_amplitude(std::mt19937_64& rng) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  std::uniform_real_distribution<Real> uni(0, 1);
  return std::polar(uni(rng), 2 * pi * uni(rng));
}

}  // namespace nmtel::oracle
