#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "nmtel/io.hpp"
#include "nmtel/scenario.hpp"
#include "nmtel/verify.hpp"

using namespace nmtel;
using C = std::complex<double>;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("nmtel_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("scenario validation names the offending field") {
  Scenario<double> s;
  s.lambda = 0;
  CHECK_THROWS_WITH_AS(run_scenario(s), doctest::Contains("lambda"), std::invalid_argument);
  s = {};
  s.t_max = -1;
  CHECK_THROWS_WITH_AS(run_scenario(s), doctest::Contains("t_max"), std::invalid_argument);
  s = {};
  s.n_samples = 1;
  CHECK_THROWS_WITH_AS(run_scenario(s), doctest::Contains("n_samples"), std::invalid_argument);
}

TEST_CASE("fidelity traces start at one and stay in range") {
  Scenario<double> s;  // BellPhi, lambda=5, avg fidelity, analytic
  const auto trace = run_scenario(s);
  REQUIRE(int(trace.samples.size()) == s.n_samples);
  CHECK(trace.has_m);
  CHECK(trace.samples.front().t == 0.0);
  CHECK(trace.samples.front().value == doctest::Approx(1.0).epsilon(1e-12));
  double prev_t = -1;
  for (const auto& row : trace.samples) {
    CHECK(row.t > prev_t);
    prev_t = row.t;
    CHECK(row.value >= 0);
    CHECK(row.value <= 1 + 1e-12);
  }
}

TEST_CASE("amplitude traces carry no index column and stay in the unit disc") {
  Scenario<double> s;
  s.quantity = Quantity::GAbs;
  s.lambda = 0.01;
  s.t_max = 60;
  const auto trace = run_scenario(s);
  CHECK_FALSE(trace.has_m);
  CHECK(trace.samples.front().value == doctest::Approx(1.0));
  for (const auto& row : trace.samples) {
    CHECK(row.value >= 0);
    CHECK(row.value <= 1 + 1e-12);
  }
}

TEST_CASE("analytic and numeric engines agree") {
  for (const auto& [lam, del] : {std::pair{5.0, 0.0}, std::pair{0.01, 1.0}}) {
    Scenario<double> a;
    a.lambda = lam;
    a.delta = del;
    a.t_max = lam < 1 ? 30 : 10;
    a.n_samples = 201;
    Scenario<double> n = a;
    n.engine = Engine::Numeric;
    const auto ta = run_scenario(a), tn = run_scenario(n);
    REQUIRE(ta.samples.size() == tn.samples.size());
    for (std::size_t i = 0; i < ta.samples.size(); ++i) {
      CHECK(ta.samples[i].t == doctest::Approx(tn.samples[i].t).epsilon(1e-14));
      CHECK(std::abs(ta.samples[i].value - tn.samples[i].value) < 1e-7);
    }
  }
}

TEST_CASE("psi-channel worst-case trace equals the squared amplitude") {
  Scenario<double> s;
  s.lambda = 0.01;
  s.initial = InitialChannel<double>::bell_psi();
  s.quantity = Quantity::MinFidelity;
  s.t_max = 60;
  s.n_samples = 301;
  const ReservoirParams<double> p{0.01, 0, 1};
  for (const auto& row : run_scenario(s).samples) {
    CHECK(row.m == 1);
    CHECK(std::abs(row.value - std::norm(g_analytic(p, row.t))) < 1e-12);
  }
}

TEST_CASE("revival shows up in the oscillatory-regime average-fidelity trace") {
  Scenario<double> s;
  s.lambda = 0.01;
  s.t_max = 60;
  s.n_samples = 601;
  const auto trace = run_scenario(s);
  bool dipped = false, revived = false;
  for (const auto& row : trace.samples) {
    if (!dipped && row.value < 2.0 / 3 + 1e-3) dipped = true;
    if (dipped && row.value > 2.0 / 3 + 5e-3) revived = true;
  }
  CHECK(dipped);
  CHECK(revived);
}

TEST_CASE("custom initial states flow through the scenario") {
  const Vector4<double> b3 = bell_state<double>(3);
  Scenario<double> s;
  s.initial = InitialChannel<double>::custom_state((b3 * b3.adjoint()).eval());
  s.quantity = Quantity::BellProbabilities;
  s.n_samples = 50;
  const auto trace = run_scenario(s);
  CHECK(trace.samples.front().m == 3);
  CHECK(trace.samples.front().value == doctest::Approx(1.0).epsilon(1e-12));
  // once mostly decayed the channel is nearest the phi components
  CHECK(trace.samples.back().m == 3);
  CHECK(trace.samples.back().value == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("figure presets encode the published parameter sets") {
  using Kind = InitialChannel<double>::Kind;
  const auto f1 = figure_preset<double>(1);
  CHECK(f1.kind == Kind::BellPhi);
  CHECK(f1.lambda == 5.0);
  CHECK(f1.deltas == std::vector<double>{0, 5});
  CHECK(f1.quantity == Quantity::AvgFidelity);
  CHECK(f1.t_max == 3.0);
  const auto f2 = figure_preset<double>(2);
  CHECK(f2.kind == Kind::BellPhi);
  CHECK(f2.lambda == 0.01);
  CHECK(f2.deltas == std::vector<double>{0, 1, 2});
  CHECK(f2.t_max == 60.0);
  const auto f3 = figure_preset<double>(3);
  CHECK(f3.kind == Kind::BellPsi);
  CHECK(f3.lambda == 5.0);
  CHECK(f3.deltas == std::vector<double>{0, 5});
  const auto f4 = figure_preset<double>(4);
  CHECK(f4.kind == Kind::BellPsi);
  CHECK(f4.deltas == std::vector<double>{0, 1, 2});
  const auto f5 = figure_preset<double>(5);
  CHECK(f5.kind == Kind::BellPhi);
  CHECK(f5.quantity == Quantity::MinFidelity);
  CHECK(f5.deltas == std::vector<double>{0, 1});
  const auto f6 = figure_preset<double>(6);
  CHECK(f6.kind == Kind::BellPsi);
  CHECK(f6.quantity == Quantity::MinFidelity);
  CHECK(f6.deltas == std::vector<double>{0, 1});
  CHECK_THROWS_AS(figure_preset<double>(7), std::invalid_argument);
}

TEST_CASE("csv writer emits the documented shape") {
  const fs::path dir = fresh_dir("csv");
  FidelityTrace<double> trace;
  trace.has_m = true;
  trace.samples = {{0, 1, 0}, {0.5, 2.0 / 3, 3}};
  const fs::path p = dir / "t.csv";
  write_trace_csv(p, trace);
  CHECK(slurp(p) == "gamma0_t,value,m\n0,1,0\n0.5,0.666666666667,3\n");

  trace.has_m = false;
  write_trace_csv(p, trace);
  CHECK(slurp(p) == "gamma0_t,value\n0,1\n0.5,0.666666666667\n");
}

TEST_CASE("figure output is deterministic byte for byte") {
  const fs::path d1 = fresh_dir("fig_a"), d2 = fresh_dir("fig_b");
  const auto w1 = run_figure<double>(5, d1);
  const auto w2 = run_figure<double>(5, d2);
  REQUIRE(w1.size() == 2);
  REQUIRE(w2.size() == 2);
  CHECK(w1[0].filename() == "fig5_0.csv");
  CHECK(w1[1].filename() == "fig5_1.csv");
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const std::string body = slurp(w1[i]);
    CHECK(body == slurp(w2[i]));
    CHECK(body.rfind("gamma0_t,value,m\n", 0) == 0);
    CHECK(body.find('\r') == std::string::npos);
  }
}

TEST_CASE("custom state files round-trip and are validated on load") {
  const fs::path dir = fresh_dir("state");
  const fs::path good = dir / "good.txt";
  {
    std::ofstream out(good);
    // phi-type Bell projector, row-major re,im pairs
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const double v = (r == 0 || r == 3) && (c == 0 || c == 3) ? 0.5 : 0.0;
        out << v << ",0" << (c == 3 ? "\n" : " ");
      }
  }
  const Matrix4<double> rho = load_custom_state<double>(good);
  CHECK(std::abs(rho(0, 3) - C(0.5)) < 1e-15);
  CHECK_NOTHROW(validate_density<double, 4>(rho));

  const fs::path bad_count = dir / "count.txt";
  std::ofstream(bad_count) << "1,0 0,0\n";
  CHECK_THROWS_WITH_AS(load_custom_state<double>(bad_count), doctest::Contains("16"),
                       std::invalid_argument);

  const fs::path bad_tok = dir / "tok.txt";
  {
    std::ofstream out(bad_tok);
    for (int i = 0; i < 15; ++i) out << "0,0 ";
    out << "nope\n";
  }
  CHECK_THROWS_AS(load_custom_state<double>(bad_tok), std::invalid_argument);

  const fs::path bad_phys = dir / "phys.txt";
  {
    std::ofstream out(bad_phys);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out << (r == c ? "0.5,0" : "0,0") << (c == 3 ? "\n" : " ");
  }
  CHECK_THROWS_WITH_AS(load_custom_state<double>(bad_phys), doctest::Contains("trace"),
                       std::invalid_argument);
}

TEST_CASE("number formatting is plain, dotted and 12-significant-digit") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(2.0 / 3) == "0.666666666667");
  CHECK(format_number(1e-30) == "1e-30");
  CHECK(format_number(23.27350658328533) == "23.2735065833");
}

TEST_CASE("verification suite passes clean and catches an injected fault") {
  const auto clean = run_verify({});
  CHECK(!clean.empty());
  for (const auto& r : clean) {
    INFO(r.name, ": err ", r.err, " bound ", r.bound);
    CHECK(r.pass);
  }
  const auto faulty = run_verify({1e-10, 1.01});
  bool physicality_failed = false;
  for (const auto& r : faulty)
    if (!r.pass && r.name.find("physicality") != std::string::npos) physicality_failed = true;
  CHECK(physicality_failed);
}

}  // TEST_SUITE
