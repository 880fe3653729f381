#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nmtel/channel.hpp"
#include "nmtel/decoherence.hpp"
#include "nmtel/oracle.hpp"
#include "nmtel/teleport.hpp"
#include "nmtel/types.hpp"

namespace nmtel {

struct CheckResult {
  std::string name;
  bool pass;
  double err;
  double bound;  // <= 0 means informational only
  std::string note;
};

struct VerifyOptions {
  double tol = 1e-10;        // solver tolerance for the integrator cross-check
  double inject_gscale = 1;  // fault injection: scale K0's amplitude entry only
};

namespace detail {

// deliberately breakable Kraus application: scaling only K0's g entry (without
// recomputing K1) violates completeness, which the physicality check must catch
template <typename Real>
Matrix4<Real> evolve_injected(const Matrix4<Real>& rho0, const Complex<Real>& g, Real scale) {
  KrausPair<Real> kp = single_qubit_kraus(g);
  kp.k0(0, 0) *= scale;
  const std::array<const Matrix2<Real>*, 2> ks{&kp.k0, &kp.k1};
  Matrix4<Real> rho = Matrix4<Real>::Zero();
  for (const auto* ki : ks)
    for (const auto* kj : ks) {
      const Matrix4<Real> kij = kron<Real, 2, 2, 2, 2>(*ki, *kj);
      rho += kij * rho0 * kij.adjoint();
    }
  return rho;
}

}  // namespace detail

inline std::vector<CheckResult> run_verify(const VerifyOptions& opt = {}) {
  using Real = double;
  std::vector<CheckResult> results;
  auto add = [&](const std::string& name, double err, double bound, std::string note = "") {
    results.push_back({name, bound <= 0 || err <= bound, err, bound, std::move(note)});
  };

  // integrator against the closed-form amplitude
  {
    double worst = 0;
    const SolverConfig<Real> cfg{1e-3, Real(opt.tol), 30};
    for (const auto& [lam, del] : std::vector<std::pair<Real, Real>>{
             {5, 0}, {5, 5}, {0.01, 0}, {0.01, 1}, {0.01, 2}}) {
      const ReservoirParams<Real> p{lam, del, 1};
      for (const auto& [t, g] : g_numeric(p, cfg, 601))
        worst = std::max(worst, std::abs(g - g_analytic(p, t)));
    }
    add("decoherence integrator vs closed form", worst, std::max(10 * opt.tol, 1e-8));
  }

  // flat-spectrum limit
  {
    const ReservoirParams<Real> p{1000, 0, 1};
    double worst = 0;
    for (int i = 0; i <= 500; ++i) {
      const Real t = 5.0 * i / 500;
      worst = std::max(worst, std::abs(std::abs(g_analytic(p, t)) - g_markovian(p, t)));
    }
    add("flat-spectrum limit of |G|", worst, 2e-3);
  }

  std::mt19937_64 rng(20260816);

  // Kraus map vs stated element updates
  {
    double worst = 0;
    for (int it = 0; it < 300; ++it) {
      const auto rho0 = oracle::random_density_matrix<Real, 4>(rng);
      const auto g = oracle::random_amplitude<Real>(rng);
      const auto init = InitialChannel<Real>::custom_state(rho0);
      const Matrix4<Real> full = evolve(init, g);
      const ClosedFormElements<Real> cf = evolve_closed_form(init, g);
      worst = std::max({worst, std::abs(full(0, 0) - cf.r11), std::abs(full(1, 1) - cf.r22),
                        std::abs(full(2, 2) - cf.r33), std::abs(full(3, 3) - cf.r44),
                        std::abs(full(0, 3) - cf.r14), std::abs(full(1, 2) - cf.r23)});
    }
    add("Kraus map vs element updates", worst, 1e-12);
  }

  // physicality of evolved states (fault-injection point)
  {
    double worst_trace = 0, worst_herm = 0, worst_eig = 0;
    for (int it = 0; it < 200; ++it) {
      const auto rho0 = oracle::random_density_matrix<Real, 4>(rng);
      const auto g = oracle::random_amplitude<Real>(rng);
      const Matrix4<Real> rho = detail::evolve_injected<Real>(rho0, g, Real(opt.inject_gscale));
      worst_trace = std::max(worst_trace, std::abs(std::abs(rho.trace()) - 1.0));
      worst_herm = std::max(worst_herm, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Matrix4<Real>> es(rho, Eigen::EigenvaluesOnly);
      worst_eig = std::max(worst_eig, -es.eigenvalues().minCoeff());
    }
    add("evolved-state physicality (trace)", worst_trace, 1e-12,
        opt.inject_gscale != 1 ? "fault injection active" : "");
    add("evolved-state physicality (hermiticity)", worst_herm, 1e-12);
    add("evolved-state physicality (positivity)", worst_eig, 1e-10);
  }

  // Bell completeness
  {
    double worst = 0;
    for (int it = 0; it < 200; ++it) {
      const auto rho = oracle::random_density_matrix<Real, 4>(rng);
      Real sum = 0;
      for (BellIndex m = 0; m < 4; ++m) sum += bell_overlap(rho, m);
      worst = std::max(worst, std::abs(double(sum) - 1.0));
    }
    add("Bell overlap completeness", worst, 1e-12);
  }

  // three-qubit protocol vs generalized-depolarizing output
  {
    double worst = 0;
    for (int it = 0; it < 100; ++it) {
      const auto rho = oracle::random_density_matrix<Real, 4>(rng);
      const auto psi = oracle::random_input_state<Real>(rng);
      const BellIndex m = BellIndex(rng() % 4);
      const Matrix2<Real> sim = oracle::protocol_simulate(rho, psi, m);
      const Matrix2<Real> ref = output_state(probabilities(rho, m), psi);
      worst = std::max(worst, double((sim - ref).cwiseAbs().maxCoeff()));
    }
    add("protocol simulation vs mixture form", worst, 1e-12);
  }

  // sphere quadrature vs closed-form average
  {
    double worst = 0;
    const oracle::QuadratureSpec spec{};
    for (int it = 0; it < 25; ++it) {
      const auto rho = oracle::random_density_matrix<Real, 4>(rng);
      const BellIndex m = BellIndex(rng() % 4);
      const Real quad = oracle::average_fidelity_quadrature(rho, m, spec);
      const Real closed = Real(1) / 3 + Real(2) / 3 * probabilities(rho, m).p[0];
      worst = std::max(worst, std::abs(double(quad - closed)));
    }
    add("sphere quadrature vs closed-form average", worst, 1e-6);
  }

  // closed-form average fidelities on the two Bell channels
  {
    double worst_phi = 0, worst_psi = 0;
    const auto phi = InitialChannel<Real>::bell_phi();
    const auto psi = InitialChannel<Real>::bell_psi();
    for (const Real lam : {Real(5), Real(0.01)}) {
      const ReservoirParams<Real> p0{lam, 0, 1};
      const ReservoirParams<Real> p2{lam, 2, 1};
      const Real t_max = lam > 1 ? 3.0 : 60.0;
      for (int i = 0; i <= 200; ++i) {
        const Real t = t_max * i / 200;
        const auto g0 = g_analytic(p0, t);
        worst_phi = std::max(worst_phi,
                             std::abs(double(average_fidelity_optimized(evolve(phi, g0)) -
                                             average_fidelity_closed_phi(g0))));
        for (const auto& g : {g0, g_analytic(p2, t)})
          worst_psi = std::max(worst_psi,
                               std::abs(double(average_fidelity_optimized(evolve(psi, g)) -
                                               average_fidelity_closed_psi(g))));
      }
    }
    add("closed-form average fidelity (phi channel, zero detuning)", worst_phi, 1e-12);
    add("closed-form average fidelity (psi channel)", worst_psi, 1e-12);
  }

  // closed-form minimal fidelities inside their validity windows, against the
  // refined brute-force minimum
  {
    double worst = 0;
    const oracle::QuadratureSpec spec{181, 361, oracle::QuadratureSpec::Rule::Midpoint};
    const ReservoirParams<Real> mk{5, 0, 1}, nmk{0.01, 0, 1};
    const auto phi = InitialChannel<Real>::bell_phi();
    const auto psi = InitialChannel<Real>::bell_psi();
    for (int i = 0; i < 8; ++i) {
      const Real tp_mk = 1.0 + (3.0 - 1.0) * i / 7, tp_nm = 12.0 + (32.0 - 12.0) * i / 7;
      const Real ts_mk = 0.05 + (1.1 - 0.05) * i / 7, ts_nm = 0.5 + (13.0 - 0.5) * i / 7;
      for (const auto& [p, tphi, tpsi] :
           {std::tuple{mk, tp_mk, ts_mk}, std::tuple{nmk, tp_nm, ts_nm}}) {
        const auto gph = g_analytic(p, tphi), gps = g_analytic(p, tpsi);
        worst = std::max(worst, std::abs(double(oracle::minimal_fidelity_bruteforce(
                                                    evolve(phi, gph), 0, spec) -
                                                minimal_fidelity_closed_phi(gph))));
        worst = std::max(worst, std::abs(double(oracle::minimal_fidelity_bruteforce(
                                                    evolve(psi, gps), 1, spec) -
                                                minimal_fidelity_closed_psi(gps))));
      }
    }
    add("closed-form minimal fidelity vs brute force", worst, 1e-6);
  }

  // informational: the phi-channel closed-form average assumes g^2 real; report
  // its drift against the overlap pipeline under detuning
  {
    double worst = 0;
    const auto phi = InitialChannel<Real>::bell_phi();
    const ReservoirParams<Real> p{0.01, 2, 1};
    for (int i = 0; i <= 200; ++i) {
      const auto g = g_analytic(p, 60.0 * i / 200);
      worst = std::max(worst, std::abs(double(average_fidelity_optimized(evolve(phi, g)) -
                                              average_fidelity_closed_phi(g))));
    }
    add("note: phi closed-form average under detuning (pipeline is authoritative)", worst, 0,
        "expected nonzero; documents the closed form's validity domain");
  }

  return results;
}

}  // namespace nmtel
