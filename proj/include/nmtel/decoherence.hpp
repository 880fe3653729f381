#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmtel/types.hpp"

namespace nmtel {

// Lorentzian reservoir, all rates in units of gamma0, time means gamma0*t.
template <typename Real>
struct ReservoirParams {
  Real lambda;        // spectral width
  Real delta = 0;     // detuning
  Real gamma0 = 1;    // reference decay rate, the time unit
};

template <typename Real>
void validate_params(const ReservoirParams<Real>& p) {
  if (!(p.lambda > 0)) throw std::invalid_argument("lambda must be > 0");
  if (!(p.gamma0 > 0)) throw std::invalid_argument("gamma0 must be > 0");
  if (!std::isfinite(p.delta)) throw std::invalid_argument("delta must be finite");
}

// W^2 = gamma0*lambda/2, never stored, always recomputed
template <typename Real>
Real coupling_w2(const ReservoirParams<Real>& p) {
  return p.gamma0 * p.lambda / 2;
}

template <typename Real>
Complex<Real> correlation_kernel(const ReservoirParams<Real>& p, Real tau) {
  validate_params(p);
  if (!(tau >= 0)) throw std::invalid_argument("tau must be >= 0");
  const Complex<Real> a(p.lambda, -p.delta);
  return coupling_w2(p) * std::exp(-a * tau);
}

template <typename Real>
struct DecoherenceValue {
  Real t;
  Complex<Real> g;
};

namespace detail {

// characteristic discriminant d = sqrt((lambda - i delta)^2 - 2 gamma0 lambda),
// principal branch; the amplitude below is even in d so the branch is immaterial
template <typename Real>
Complex<Real> char_root(const ReservoirParams<Real>& p) {
  const Complex<Real> a(p.lambda, -p.delta);
  return std::sqrt(a * a - 2 * p.gamma0 * p.lambda);
}

template <typename Real>
Complex<Real> sinhc(const Complex<Real>& z) {
  if (std::abs(z) < Real(1e-4)) {
    const Complex<Real> z2 = z * z;
    return Real(1) + z2 / Real(6) * (Real(1) + z2 / Real(20));
  }
  return std::sinh(z) / z;
}

}  // namespace detail

// G(t) = e^{-at/2} (cosh(dt/2) + (a/d) sinh(dt/2)), a = lambda - i delta.
// Evaluated as cosh + (at/2)*sinhc near the degenerate point (finite at d = 0,
// where it reduces to e^{-at/2}(1 + at/2)), and in split-exponential form
// [(1+a/d)e^{(d-a)t/2} + (1-a/d)e^{-(d+a)t/2}]/2 for large |dt| -- the naive
// cosh overflows around lambda*t ~ 1400 even though G itself stays bounded.
template <typename Real>
Complex<Real> g_analytic(const ReservoirParams<Real>& p, Real t) {
  validate_params(p);
  if (!(t >= 0)) throw std::invalid_argument("t must be >= 0");
  const Complex<Real> a(p.lambda, -p.delta);
  const Complex<Real> d = detail::char_root(p);
  if (std::abs(d) < Real(1e-10) * (p.lambda + p.gamma0))
    return std::exp(-a * t / Real(2)) * (Real(1) + a * t / Real(2));
  const Complex<Real> z = d * t / Real(2);
  if (std::abs(z) <= Real(0.5))
    return std::exp(-a * t / Real(2)) * (std::cosh(z) + a * t / Real(2) * detail::sinhc(z));
  const Complex<Real> r = a / d;
  return ((Real(1) + r) * std::exp((d - a) * t / Real(2)) +
          (Real(1) - r) * std::exp(-(d + a) * t / Real(2))) / Real(2);
}

// flat-spectrum reference curve
template <typename Real>
Real g_markovian(const ReservoirParams<Real>& p, Real t) {
  validate_params(p);
  if (!(t >= 0)) throw std::invalid_argument("t must be >= 0");
  return std::exp(-p.gamma0 * t / 2);
}

template <typename Real>
struct SolverConfig {
  Real step = Real(1e-3);   // initial step
  Real tol = Real(1e-10);   // local error tolerance (abs and rel)
  Real t_max = 3;
};

template <typename Real>
void validate_config(const SolverConfig<Real>& c) {
  if (!(c.step > 0)) throw std::invalid_argument("step must be > 0");
  if (!(c.tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (!(c.t_max > 0)) throw std::invalid_argument("t_max must be > 0");
}

class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(double t)
      : std::runtime_error("step size underflow at t = " + std::to_string(t)), t_fail(t) {}
  double t_fail;
};

// Memory-kernel equation dG/dt = -int_0^t f(t-s) G(s) ds solved through the
// exact local reduction for the exponential kernel:
//   dG/dt = -K,   dK/dt = W^2 G - (lambda - i delta) K,   G(0)=1, K(0)=0.
// Integrated with the adaptive embedded Dormand-Prince 5(4) pair; samples are
// returned on a uniform grid over [0, t_max] (steps land on grid points
// exactly, so no interpolation is involved).
template <typename Real>
std::vector<DecoherenceValue<Real>> g_numeric(const ReservoirParams<Real>& p,
                                              const SolverConfig<Real>& cfg,
                                              std::size_t n_samples = 601) {
  validate_params(p);
  validate_config(cfg);
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");

  using C = Complex<Real>;
  struct State { C g, k; };
  const C a(p.lambda, -p.delta);
  const Real w2 = coupling_w2(p);
  auto rhs = [&](const State& y) { return State{-y.k, w2 * y.g - a * y.k}; };

  // Dormand-Prince 5(4) tableau (FSAL); e = b5th - b4th
  static const Real a21 = Real(1) / 5;
  static const Real a31 = Real(3) / 40, a32 = Real(9) / 40;
  static const Real a41 = Real(44) / 45, a42 = Real(-56) / 15, a43 = Real(32) / 9;
  static const Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187,
                    a53 = Real(64448) / 6561, a54 = Real(-212) / 729;
  static const Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33,
                    a63 = Real(46732) / 5247, a64 = Real(49) / 176,
                    a65 = Real(-5103) / 18656;
  static const Real b1 = Real(35) / 384, b3 = Real(500) / 1113, b4 = Real(125) / 192,
                    b5 = Real(-2187) / 6784, b6 = Real(11) / 84;
  static const Real e1 = b1 - Real(5179) / 57600, e3 = b3 - Real(7571) / 16695,
                    e4 = b4 - Real(393) / 640, e5 = b5 + Real(92097) / 339200,
                    e6 = b6 - Real(187) / 2100, e7 = Real(-1) / 40;

  std::vector<DecoherenceValue<Real>> out;
  out.reserve(n_samples);
  out.push_back({Real(0), C(1)});

  State y{C(1), C(0)};
  State k1 = rhs(y);
  Real t = 0;
  Real h_prop = std::min(cfg.step, cfg.t_max / Real(n_samples - 1));
  std::size_t next = 1;

  auto axpy = [](const State& y0,
                 std::initializer_list<std::pair<Real, const State*>> terms, Real h) {
    State r = y0;
    for (const auto& [c, k] : terms) {
      r.g += h * c * k->g;
      r.k += h * c * k->k;
    }
    return r;
  };

  while (next < n_samples) {
    const Real t_target = cfg.t_max * Real(next) / Real(n_samples - 1);
    const Real gap = t_target - t;
    const bool hit = h_prop >= gap;
    const Real h = hit ? gap : h_prop;
    if (h_prop < 32 * std::numeric_limits<Real>::epsilon() * std::max(Real(1), t))
      throw SolverFailure(double(t));

    const State k2 = rhs(axpy(y, {{a21, &k1}}, h));
    const State k3 = rhs(axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    const State k4 = rhs(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    const State k5 = rhs(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    const State k6 =
        rhs(axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    const State y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    const State k7 = rhs(y5);

    const C err_g = h * (e1 * k1.g + e3 * k3.g + e4 * k4.g + e5 * k5.g + e6 * k6.g + e7 * k7.g);
    const C err_k = h * (e1 * k1.k + e3 * k3.k + e4 * k4.k + e5 * k5.k + e6 * k6.k + e7 * k7.k);
    auto comp = [&](const C& e, const C& y0, const C& y1) {
      return std::abs(e) / (cfg.tol * (1 + std::max(std::abs(y0), std::abs(y1))));
    };
    const Real cg = comp(err_g, y.g, y5.g), ck = comp(err_k, y.k, y5.k);
    const Real err = std::sqrt((cg * cg + ck * ck) / 2);

    const Real factor =
        std::clamp(err > 0 ? Real(0.9) * std::pow(err, Real(-0.2)) : Real(5), Real(0.2), Real(5));
    if (err <= 1) {
      t = hit ? t_target : t + h;
      y = y5;
      k1 = k7;  // FSAL
      if (hit) {
        out.push_back({t, y.g});
        ++next;
      }
      // keep adaptive momentum across clipped grid-hit steps
      h_prop = hit ? std::max(h_prop, h * factor) : h * factor;
    } else {
      h_prop = h * factor;
    }
  }
  return out;
}

// bisected zero crossings of Re G(t) on (0, t_hi] (meaningful diagnostics for
// delta = 0, where G is real)
template <typename Real>
std::vector<Real> g_zero_crossings(const ReservoirParams<Real>& p, Real t_hi,
                                   std::size_t max_count = 8, std::size_t n_scan = 8192) {
  validate_params(p);
  if (!(t_hi > 0)) throw std::invalid_argument("t_hi must be > 0");
  std::vector<Real> zeros;
  Real prev_t = 0;
  Real prev = std::real(g_analytic(p, Real(0)));
  for (std::size_t i = 1; i <= n_scan && zeros.size() < max_count; ++i) {
    const Real t = t_hi * Real(i) / Real(n_scan);
    const Real cur = std::real(g_analytic(p, t));
    if ((prev > 0 && cur <= 0) || (prev < 0 && cur >= 0)) {
      Real lo = prev_t, hi = t, flo = prev;
      for (int it = 0; it < 200 && hi - lo > Real(1e-14) * std::max(Real(1), hi); ++it) {
        const Real mid = (lo + hi) / 2;
        const Real fm = std::real(g_analytic(p, mid));
        if ((flo <= 0) == (fm <= 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      zeros.push_back((lo + hi) / 2);
    }
    prev_t = t;
    prev = cur;
  }
  return zeros;
}

}  // namespace nmtel
