#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmtel/io.hpp"
#include "nmtel/scenario.hpp"
#include "nmtel/verify.hpp"

namespace fs = std::filesystem;
using Real = double;

namespace {

nmtel::InitialChannel<Real> parse_initial(const std::string& text) {
  if (text == "phi") return nmtel::InitialChannel<Real>::bell_phi();
  if (text == "psi") return nmtel::InitialChannel<Real>::bell_psi();
  if (text.rfind("custom:", 0) == 0)
    return nmtel::InitialChannel<Real>::custom_state(
        nmtel::load_custom_state<Real>(text.substr(7)));
  throw CLI::ValidationError("--initial", "expected phi, psi or custom:<file>");
}

const std::map<std::string, nmtel::Quantity> kQuantities{
    {"g_abs", nmtel::Quantity::GAbs},
    {"g_re", nmtel::Quantity::GRe},
    {"g_im", nmtel::Quantity::GIm},
    {"avg_fidelity", nmtel::Quantity::AvgFidelity},
    {"min_fidelity", nmtel::Quantity::MinFidelity},
    {"bell_probabilities", nmtel::Quantity::BellProbabilities}};

const std::map<std::string, nmtel::Engine> kEngines{{"analytic", nmtel::Engine::Analytic},
                                                    {"numeric", nmtel::Engine::Numeric}};

// "a:b:n" -> n uniform values from a to b
std::vector<Real> parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("range", "expected a:b:n, got '" + text + "'");
  Real a, b;
  long n;
  try {
    a = std::stod(text.substr(0, c1));
    b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    n = std::stol(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected a:b:n, got '" + text + "'");
  }
  if (n < 1) throw CLI::ValidationError("range", "need at least one point");
  std::vector<Real> vals;
  for (long i = 0; i < n; ++i)
    vals.push_back(n == 1 ? a : a + (b - a) * Real(i) / Real(n - 1));
  return vals;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("output directory unusable: " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teleportation-fidelity traces through locally damped Bell channels"};
  app.require_subcommand(1);

  // trace
  auto* trace = app.add_subcommand("trace", "write one trace CSV for a single scenario");
  Real lambda = 5, delta = 0, t_max = -1;
  int samples = 600;
  std::string initial = "phi", quantity = "avg_fidelity", engine = "analytic", out;
  trace->add_option("--lambda", lambda, "spectral width (units of gamma0)");
  trace->add_option("--delta", delta, "detuning (units of gamma0)");
  trace->add_option("--initial", initial, "phi | psi | custom:<file>");
  trace->add_option("--quantity", quantity, "g_abs|g_re|g_im|avg_fidelity|min_fidelity|bell_probabilities");
  trace->add_option("--engine", engine, "analytic | numeric");
  trace->add_option("--t-max", t_max, "trace end (default 3, or 60 when lambda < 1)");
  trace->add_option("--samples", samples, "number of rows");
  trace->add_option("--out", out, "output CSV path")->required();

  // figure
  auto* figure = app.add_subcommand("figure", "write the preset curves for one figure");
  int fig_id = 0;
  std::string out_dir;
  figure->add_option("--id", fig_id, "figure preset 1..6")->required();
  figure->add_option("--out-dir", out_dir, "directory for the CSV files")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run the oracle cross-check suite");
  nmtel::VerifyOptions vopt;
  verify->add_option("--tol", vopt.tol, "integrator tolerance for the cross-check");
  verify->add_option("--inject-gscale", vopt.inject_gscale,
                     "fault injection: scale the damping amplitude without fixing completeness");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "trace CSVs over a (lambda, delta) grid");
  std::string lambda_range, delta_range;
  std::string sw_initial = "phi", sw_quantity = "avg_fidelity", sw_engine = "analytic";
  Real sw_t_max = -1;
  int sw_samples = 600;
  std::string sw_out_dir;
  sweep->add_option("--lambda-range", lambda_range, "a:b:n")->required();
  sweep->add_option("--delta-range", delta_range, "a:b:n")->required();
  sweep->add_option("--initial", sw_initial, "phi | psi | custom:<file>");
  sweep->add_option("--quantity", sw_quantity, "as for trace");
  sweep->add_option("--engine", sw_engine, "analytic | numeric");
  sweep->add_option("--t-max", sw_t_max, "trace end (default as for trace)");
  sweep->add_option("--samples", sw_samples, "rows per file");
  sweep->add_option("--out-dir", sw_out_dir, "directory for the CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trace) {
      nmtel::Scenario<Real> s;
      s.lambda = lambda;
      s.delta = delta;
      s.initial = parse_initial(initial);
      if (!kQuantities.count(quantity))
        throw std::invalid_argument("quantity: unknown value '" + quantity + "'");
      if (!kEngines.count(engine))
        throw std::invalid_argument("engine: unknown value '" + engine + "'");
      s.quantity = kQuantities.at(quantity);
      s.engine = kEngines.at(engine);
      s.t_max = t_max > 0 ? t_max : (lambda < 1 ? 60 : 3);
      s.n_samples = samples;
      nmtel::write_trace_csv(out, nmtel::run_scenario(s));
      std::printf("wrote %s\n", out.c_str());
    } else if (*figure) {
      ensure_dir(out_dir);
      for (const auto& p : nmtel::run_figure<Real>(fig_id, out_dir))
        std::printf("wrote %s\n", p.string().c_str());
    } else if (*verify) {
      bool all = true;
      for (const auto& r : nmtel::run_verify(vopt)) {
        if (r.bound > 0)
          std::printf("%s  %s (max err %.3e, bound %.1e)%s%s\n", r.pass ? "PASS" : "FAIL",
                      r.name.c_str(), r.err, r.bound, r.note.empty() ? "" : " -- ",
                      r.note.c_str());
        else
          std::printf("INFO  %s (max err %.3e)%s%s\n", r.name.c_str(), r.err,
                      r.note.empty() ? "" : " -- ", r.note.c_str());
        all = all && r.pass;
      }
      if (!all) return 4;
    } else if (*sweep) {
      ensure_dir(sw_out_dir);
      nmtel::Scenario<Real> base;
      base.initial = parse_initial(sw_initial);
      if (!kQuantities.count(sw_quantity))
        throw std::invalid_argument("quantity: unknown value '" + sw_quantity + "'");
      if (!kEngines.count(sw_engine))
        throw std::invalid_argument("engine: unknown value '" + sw_engine + "'");
      base.quantity = kQuantities.at(sw_quantity);
      base.engine = kEngines.at(sw_engine);
      base.n_samples = sw_samples;
      for (const Real lam : parse_range(lambda_range))
        for (const Real del : parse_range(delta_range)) {
          nmtel::Scenario<Real> s = base;
          s.lambda = lam;
          s.delta = del;
          s.t_max = sw_t_max > 0 ? sw_t_max : (lam < 1 ? 60 : 3);
          const fs::path p = fs::path(sw_out_dir) /
                             ("sweep_lambda" + nmtel::format_number(lam) + "_delta" +
                              nmtel::format_number(del) + ".csv");
          nmtel::write_trace_csv(p, nmtel::run_scenario(s));
          std::printf("wrote %s\n", p.string().c_str());
        }
    }
  } catch (const nmtel::SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
