#include <doctest.h>

#include <cmath>

#include "ehnet/analysis.hpp"
#include "ehnet/errors.hpp"
#include "ehnet/random.hpp"
#include "fixtures.hpp"

using namespace ehnet;

namespace {

// A random system that satisfies both battery conditions.
SystemParams random_system(random::CounterRng& rng, double eta) {
  SystemParams s;
  s.R_max = 1 + 4 * rng.uniform();
  s.P_max = 0.5 + 3 * rng.uniform();
  s.mu_max = 0.5 + 3 * rng.uniform();
  s.E_max = 50 + 300 * rng.uniform();
  s.xi = 0.7 + 0.3 * rng.uniform();
  s.eta = eta;
  s.g_max = 0.5 + rng.uniform();
  s.delta1 = 0.5 + 3 * rng.uniform();
  s.delta2 = rng.uniform() < 0.5 ? 0.0 : 2 * rng.uniform();
  const double a1 = ((1 - s.eta) * s.E_max + s.P_max / s.xi) / s.xi;
  const double a2 = (s.E_max - s.P_max / s.xi) / s.xi;
  s.e_max = std::min(a1, a2) * (0.2 + 0.7 * rng.uniform());
  return s;
}

double objective(const SystemParams& s, int N, int d, double V, double g) {
  return (N * N * gap_b1(s, d) + N * (gap_b2(s, g) + gap_b3(s, g))) / V;
}

}  // namespace

TEST_CASE("gap bound: reference parameters") {
  const auto s = fixtures::reference_system();
  CHECK(gap_b1(s, 2) == 60.5);
  const auto g = gap_bound(s, 7, 2, 30, 80);
  CHECK(g.B == doctest::Approx(49 * 60.5 + 7 * (g.B2 + g.B3)));
  CHECK(g.gap == doctest::Approx(g.B / 30));
  CHECK(g.B2 >= 0);
  CHECK(g.B3 >= 0);
  CHECK_THROWS_AS(gap_bound(s, 7, 2, 30, 50), ValidationError);
  CHECK_THROWS_AS(gap_bound(s, 7, 2, 80, 100), ValidationError);
}

TEST_CASE("gap bound: a perfect battery") {
  auto s = fixtures::reference_system(1.0);
  s.e_max = 2;
  CHECK(gap_b3(s, 70) == 0.0);
  CHECK(gap_b2(s, 70) == 0.5 * (s.P_max / s.xi) * (s.P_max / s.xi));
  s.eta = 1 - 1e-9;
  CHECK(gap_b3(s, s.E_max / 2) < 1e-4);
}

TEST_CASE("gap bound: the alternative constant assembly agrees") {
  random::CounterRng rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_system(rng, 0.9 + 0.1 * rng.uniform());
    const int N = 2 + static_cast<int>(rng.below(20));
    const int d = 1 + static_cast<int>(rng.below(5));
    const double d_mu = d * s.mu_max;
    const double theta = s.R_max + d_mu;
    const double gamma = s.E_max * rng.uniform();
    const double b1_tilde = 0.5 * d_mu * d_mu + 0.5 * (d_mu + s.R_max) * (d_mu + s.R_max);
    const double n_tilde = double(N) * N * b1_tilde + N * gap_b2(s, gamma);
    const double assembled = n_tilde + N * gap_b3(s, gamma) + double(N) * N * theta * d_mu;
    const double printed = double(N) * N * gap_b1(s, d) + N * (gap_b2(s, gamma) + gap_b3(s, gamma));
    CHECK(assembled == doctest::Approx(printed).epsilon(1e-12));
  }
}

TEST_CASE("minimize_gap: matches the grid and stays feasible") {
  random::CounterRng rng(77);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_system(rng, 0.9 + 0.099 * rng.uniform());
    const ParamWindow w(s);
    const double cap = w.v_max() * (0.3 + 0.7 * rng.uniform());
    const int N = 2 + static_cast<int>(rng.below(10));
    const auto opt = minimize_gap(s, N, 2, cap);
    const auto grid = grid_minimize_gap(s, N, 2, cap);
    CAPTURE(i);
    CHECK(opt.value <= grid.value * (1 + 1e-4));
    CHECK(opt.V > 0);
    CHECK(opt.V <= cap);
    CHECK(opt.gamma >= w.gamma_min(opt.V));
    CHECK(opt.gamma <= w.gamma_max(opt.V));
    CHECK(objective(s, N, 2, opt.V, opt.gamma) == doctest::Approx(opt.value).epsilon(1e-12));
  }
}

TEST_CASE("minimize_gap: a perfect battery pushes V to the cap") {
  auto s = fixtures::reference_system(1.0);
  s.e_max = 2;
  const double cap = ParamWindow(s).v_max();
  const auto opt = minimize_gap(s, 7, 2, cap);
  CHECK(opt.V == cap);
  CHECK_THROWS_AS(minimize_gap(s, 7, 2, 2 * cap), ValidationError);
  CHECK_THROWS_AS(minimize_gap(s, 7, 2, 0), ValidationError);
}

TEST_CASE("minimize_gap: the objective is midpoint convex on the window") {
  random::CounterRng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_system(rng, 0.9 + 0.1 * rng.uniform());
    const ParamWindow w(s);
    auto point = [&] {
      const double V = w.v_max() * (1e-3 + 0.999 * rng.uniform());
      const double g = w.gamma_min(V) + (w.gamma_max(V) - w.gamma_min(V)) * rng.uniform();
      return std::pair{V, g};
    };
    const auto [V1, g1] = point();
    const auto [V2, g2] = point();
    const double mid = objective(s, 7, 2, (V1 + V2) / 2, (g1 + g2) / 2);
    const double avg = (objective(s, 7, 2, V1, g1) + objective(s, 7, 2, V2, g2)) / 2;
    CHECK(mid <= avg + 1e-9 * (1 + std::abs(avg)));
  }
}

TEST_CASE("sweep: bad points are flagged and the rest still run") {
  const auto sc = fixtures::seven_node();
  EnsembleSpec base;
  base.V = 30;
  base.horizon = 200;
  base.runs = 2;
  const auto pts = sweep(sc, SweepParam::gamma, {50, 80}, {Algorithm::proposed}, base);
  REQUIRE(pts.size() == 2);
  CHECK_FALSE(pts[0].ok);
  CHECK(pts[0].message.find("Gamma") != std::string::npos);
  CHECK(pts[1].ok);
  const auto csv = sweep_csv(pts);
  CHECK(csv.rfind("param_value,algorithm,mean_utility,std_utility,energy_utilization\n", 0) == 0);
  CHECK(csv.find("\n80,proposed,") != std::string::npos);

  const auto em = sweep(sc, SweepParam::e_max, {10}, {Algorithm::greedy}, base);
  CHECK_FALSE(em[0].ok);
  CHECK(em[0].message.find("A1") != std::string::npos);
}

TEST_CASE("compare_algorithms runs all three") {
  const auto sc = fixtures::seven_node(0.98, 0.95);
  const auto rows = compare_algorithms(sc, 30, 200, 2, {2, 5});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].algorithm == "proposed");
  CHECK(rows[1].algorithm == "esa");
  CHECK(rows[2].algorithm == "greedy");
  for (const auto& r : rows) CHECK(r.ok);
}
