#pragma once

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmtel/channel.hpp"
#include "nmtel/decoherence.hpp"
#include "nmtel/io.hpp"
#include "nmtel/teleport.hpp"
#include "nmtel/types.hpp"

namespace nmtel {

enum class Quantity { GAbs, GRe, GIm, AvgFidelity, MinFidelity, BellProbabilities };
enum class Engine { Analytic, Numeric };

inline bool is_fidelity_quantity(Quantity q) {
  return q == Quantity::AvgFidelity || q == Quantity::MinFidelity ||
         q == Quantity::BellProbabilities;
}

template <typename Real>
struct Scenario {
  Real lambda = 5;
  Real delta = 0;
  InitialChannel<Real> initial = InitialChannel<Real>::bell_phi();
  Real t_max = 3;
  int n_samples = 600;
  Quantity quantity = Quantity::AvgFidelity;
  Engine engine = Engine::Analytic;
  SolverConfig<Real> solver{};
};

template <typename Real>
void validate_scenario(const Scenario<Real>& s) {
  if (!(s.lambda > 0)) throw std::invalid_argument("lambda: must be > 0");
  if (!std::isfinite(s.delta)) throw std::invalid_argument("delta: must be finite");
  if (!(s.t_max > 0)) throw std::invalid_argument("t_max: must be > 0");
  if (s.n_samples < 2) throw std::invalid_argument("n_samples: must be >= 2");
}

template <typename Real>
FidelityTrace<Real> run_scenario(const Scenario<Real>& s) {
  validate_scenario(s);
  const ReservoirParams<Real> params{s.lambda, s.delta, Real(1)};

  std::vector<DecoherenceValue<Real>> gs;
  if (s.engine == Engine::Numeric) {
    SolverConfig<Real> cfg = s.solver;
    cfg.t_max = s.t_max;
    gs = g_numeric(params, cfg, std::size_t(s.n_samples));
  } else {
    gs.reserve(std::size_t(s.n_samples));
    for (int i = 0; i < s.n_samples; ++i) {
      const Real t = s.t_max * Real(i) / Real(s.n_samples - 1);
      gs.push_back({t, g_analytic(params, t)});
    }
  }

  FidelityTrace<Real> trace;
  trace.has_m = is_fidelity_quantity(s.quantity);
  trace.samples.reserve(gs.size());
  for (const auto& [t, g_raw] : gs) {
    // the numeric engine can exceed |g|=1 by roundoff; pull it back onto the disc
    const Real mag = std::abs(g_raw);
    const Complex<Real> g = mag > 1 ? g_raw / mag : g_raw;
    TraceSample<Real> row{t, 0, 0};
    switch (s.quantity) {
      case Quantity::GAbs: row.value = std::abs(g); break;
      case Quantity::GRe: row.value = std::real(g); break;
      case Quantity::GIm: row.value = std::imag(g); break;
      case Quantity::AvgFidelity: {
        const auto probs = probabilities(evolve(s.initial, g));
        row.value = Real(1) / 3 + Real(2) / 3 * probs.p[0];
        row.m = probs.m;
        break;
      }
      case Quantity::MinFidelity: {
        // worst case for the channel's own Bell component; argmax for custom states
        const Matrix4<Real> rho = evolve(s.initial, g);
        const auto probs = s.initial.kind == InitialChannel<Real>::Kind::Custom
                               ? probabilities(rho)
                               : probabilities(rho, s.initial.m);
        row.value = minimal_fidelity_exact(probs);
        row.m = probs.m;
        break;
      }
      case Quantity::BellProbabilities: {
        const auto probs = probabilities(evolve(s.initial, g));
        row.value = probs.p[0];  // max_m overlap
        row.m = probs.m;
        break;
      }
    }
    trace.samples.push_back(row);
  }
  return trace;
}

template <typename Real>
struct FigurePreset {
  int id;
  typename InitialChannel<Real>::Kind kind;
  Real lambda;
  std::vector<Real> deltas;
  Quantity quantity;
  Real t_max;
};

// Markovian presets decay within 3/gamma0; the oscillatory ones need 60/gamma0
// to show the first revival and beyond
template <typename Real>
FigurePreset<Real> figure_preset(int id) {
  using Kind = typename InitialChannel<Real>::Kind;
  switch (id) {
    case 1: return {1, Kind::BellPhi, Real(5), {Real(0), Real(5)}, Quantity::AvgFidelity, Real(3)};
    case 2: return {2, Kind::BellPhi, Real(0.01), {Real(0), Real(1), Real(2)}, Quantity::AvgFidelity, Real(60)};
    case 3: return {3, Kind::BellPsi, Real(5), {Real(0), Real(5)}, Quantity::AvgFidelity, Real(3)};
    case 4: return {4, Kind::BellPsi, Real(0.01), {Real(0), Real(1), Real(2)}, Quantity::AvgFidelity, Real(60)};
    case 5: return {5, Kind::BellPhi, Real(0.01), {Real(0), Real(1)}, Quantity::MinFidelity, Real(60)};
    case 6: return {6, Kind::BellPsi, Real(0.01), {Real(0), Real(1)}, Quantity::MinFidelity, Real(60)};
    default: throw std::invalid_argument("figure id must be in 1..6");
  }
}

template <typename Real>
std::vector<std::filesystem::path> run_figure(int id, const std::filesystem::path& out_dir) {
  const FigurePreset<Real> preset = figure_preset<Real>(id);
  std::vector<std::filesystem::path> written;
  for (const Real delta : preset.deltas) {
    Scenario<Real> s;
    s.lambda = preset.lambda;
    s.delta = delta;
    s.initial = preset.kind == InitialChannel<Real>::Kind::BellPhi
                    ? InitialChannel<Real>::bell_phi()
                    : InitialChannel<Real>::bell_psi();
    s.t_max = preset.t_max;
    s.quantity = preset.quantity;
    const auto path = out_dir / ("fig" + std::to_string(id) + "_" + format_number(double(delta)) + ".csv");
    write_trace_csv(path, run_scenario(s));
    written.push_back(path);
  }
  return written;
}

}  // namespace nmtel
