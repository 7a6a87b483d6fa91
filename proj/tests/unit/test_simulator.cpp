#include <doctest.h>

#include <cmath>

#include "ehnet/analysis.hpp"
#include "ehnet/controller.hpp"
#include "ehnet/errors.hpp"
#include "ehnet/random.hpp"
#include "ehnet/simulator.hpp"
#include "fixtures.hpp"
#include "hostile.hpp"

using namespace ehnet;

namespace {

IidEnvironment iid(const Scenario& sc, std::uint64_t seed) {
  return IidEnvironment(sc.network, sc.system, sc.rate_model, {HarvestKind::two_point, seed});
}

}  // namespace

TEST_CASE("run: zero horizon gives an empty trace") {
  const auto sc = fixtures::seven_node();
  const auto p = make_policy(sc, Algorithm::proposed, 30);
  const auto t = run(sc, *p, iid(sc, 1), {0, true});
  CHECK(t.slots.empty());
  CHECK(t.metrics.horizon == 0);
}

TEST_CASE("run: same seed, same trace; different seed, different trace") {
  const auto sc = fixtures::seven_node();
  for (Algorithm a : {Algorithm::proposed, Algorithm::esa, Algorithm::greedy}) {
    const auto p = make_policy(sc, a, 30);
    const auto x = run(sc, *p, iid(sc, 7), {300, true});
    const auto y = run(sc, *p, iid(sc, 7), {300, true});
    const auto z = run(sc, *p, iid(sc, 8), {300, true});
    CHECK(x.slots == y.slots);
    CHECK(x.metrics == y.metrics);
    CHECK_FALSE(x.slots == z.slots);
  }
}

TEST_CASE("run: reference parameters, proposed, 1200 slots stays inside the bounds") {
  const auto sc = fixtures::seven_node();
  const auto p = make_policy(sc, Algorithm::proposed, 30);
  const auto t = run(sc, *p, iid(sc, 1), {1200, true});
  CHECK(t.metrics.min_energy >= 0);
  CHECK(t.metrics.max_energy <= 160);
  CHECK(t.metrics.max_backlog <= 33);
  CHECK(t.metrics.invariant_checks > 0);
  CHECK(jensen_holds(t.metrics));
  // packets in = packets in queues + packets delivered
  double queued = 0;
  for (double q : t.final_state.Q) queued += q;
  CHECK(t.metrics.admitted == doctest::Approx(queued + t.metrics.delivered).epsilon(1e-12));
}

TEST_CASE("run: hostile environments never break the sample-path bounds") {
  for (RateKind k : {RateKind::linear_gain, RateKind::orthogonal_log, RateKind::interference_log}) {
    auto sc = fixtures::seven_node();
    sc.rate_model.kind = k;
    derive_constants(sc);
    const double V = 0.4 * ParamWindow(sc.system).v_max();
    const std::int64_t T = k == RateKind::interference_log ? 1500 : 10000;
    const auto p = make_policy(sc, Algorithm::proposed, V);
    const double gamma = static_cast<const ProposedController&>(*p).params().gamma;
    for (auto mode : {Hostile::Mode::flood, Hostile::Mode::starve, Hostile::Mode::contrary,
                      Hostile::Mode::bursts}) {
      CAPTURE(to_string(k));
      CAPTURE(static_cast<int>(mode));
      RunTrace t;
      CHECK_NOTHROW(t = run(sc, *p, Hostile(sc, mode, gamma), {T, false}));
      CHECK(t.metrics.max_energy <= sc.system.E_max);
      CHECK(t.metrics.max_backlog <= sc.system.g_max * V + sc.system.R_max + 1e-9);
    }
  }
}

TEST_CASE("run: baselines respect the energy availability constraint") {
  const auto sc = fixtures::seven_node(0.98, 0.95, 2);
  for (Algorithm a : {Algorithm::esa, Algorithm::greedy}) {
    const auto p = make_policy(sc, a, 30);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) CHECK_NOTHROW(run(sc, *p, iid(sc, seed), {1200, false}));
  }
}

TEST_CASE("run: invariant failures carry a state dump") {
  auto sc = fixtures::seven_node();
  sc.system.E_max = 20;
  sc.system.e_max = 15;
  const auto p = make_policy(sc, Algorithm::proposed, 1.0);
  try {
    run(sc, *p, iid(sc, 1), {200, false});
    FAIL("expected an invariant violation");
  } catch (const InvariantViolation& e) {
    const std::string msg = e.what();
    CHECK(msg.find("slot ") != std::string::npos);
    CHECK(msg.find("node 1: E=") != std::string::npos);
  }
}

TEST_CASE("ensemble: one run equals the run itself") {
  const auto sc = fixtures::seven_node();
  EnsembleSpec spec;
  spec.V = 30;
  spec.horizon = 400;
  spec.runs = 1;
  spec.base_seed = 5;
  const auto s = run_ensemble(sc, spec);
  const auto p = make_policy(sc, Algorithm::proposed, 30);
  const auto t = run(sc, *p, iid(sc, 5), {400, false});
  CHECK(s.per_run[0] == t.metrics);
  CHECK(s.utility.mean == t.metrics.utility);
  CHECK(s.utility.std == 0.0);
  CHECK(s.rng == std::string("splitmix64-counter"));
}

TEST_CASE("ensemble: thread count does not change results") {
  const auto sc = fixtures::seven_node();
  EnsembleSpec spec;
  spec.V = 30;
  spec.horizon = 300;
  spec.runs = 6;
  spec.threads = 1;
  const auto a = run_ensemble(sc, spec);
  spec.threads = 4;
  const auto b = run_ensemble(sc, spec);
  CHECK(a == b);
}

TEST_CASE("ensemble: different seeds, consistent means") {
  const auto sc = fixtures::seven_node();
  EnsembleSpec spec;
  spec.V = 30;
  spec.runs = 10;
  spec.base_seed = 1;
  const auto a = run_ensemble(sc, spec);
  spec.base_seed = 1001;
  const auto b = run_ensemble(sc, spec);
  CHECK(a.utility.mean != b.utility.mean);
  CHECK(std::abs(a.utility.mean - b.utility.mean) <= 3 * (a.utility.std + b.utility.std));
  for (const auto& m : a.per_run) CHECK(jensen_holds(m));
}

TEST_CASE("ensemble: failures name the run") {
  auto sc = fixtures::seven_node();
  sc.system.E_max = 20;
  sc.system.e_max = 15;
  EnsembleSpec spec;
  spec.V = 1;
  spec.horizon = 200;
  spec.runs = 2;
  try {
    run_ensemble(sc, spec);
    FAIL("expected an invariant violation");
  } catch (const InvariantViolation& e) {
    CHECK(std::string(e.what()).rfind("run 0 (seed 1): ", 0) == 0);
  }
  spec.runs = 0;
  CHECK_THROWS_AS(run_ensemble(sc, spec), ValidationError);
}

TEST_CASE("environment: two-point harvest and i.i.d. channels") {
  const auto sc = fixtures::seven_node();
  const auto env = iid(sc, 3);
  const NetState s = NetState::initial(sc.network);
  int full = 0, good = 0, total = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto e = env.sample(t, s);
    for (double h : e.harvest) {
      CHECK((h == 0.0 || h == 5.0));
      full += h == 5.0;
    }
    for (std::size_t i = 0; i < 49; ++i) {
      if (i % 8 == 0) continue;
      good += e.channel.gains[i] == 2.0;
      ++total;
    }
  }
  CHECK(full / 14000.0 == doctest::Approx(0.5).epsilon(0.03));
  CHECK(double(good) / total == doctest::Approx(0.5).epsilon(0.03));
  CHECK(env.sample(17, s) == env.sample(17, s));
}
