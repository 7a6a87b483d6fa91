#include <doctest.h>

#include <cmath>

#include "ehnet/controller.hpp"
#include "ehnet/errors.hpp"
#include "fixtures.hpp"
#include "oracles/instances.hpp"
#include "oracles/oracles.hpp"

using namespace ehnet;

TEST_CASE("admission: log utility closed form") {
  const auto u = UtilityFunction::log1p();
  CHECK(admit_one(u, 30, 10, 3) == doctest::Approx(2.0));
  CHECK(admit_one(u, 30, 0, 3) == 3.0);
  CHECK(admit_one(u, 30, 60, 3) == 0.0);
}

TEST_CASE("admission: agrees with the golden-section oracle") {
  random::CounterRng rng(9);
  for (int i = 0; i < 300; ++i) {
    const double V = 1 + 70 * rng.uniform(), Q = 80 * rng.uniform(), a = 0.1 + 0.8 * rng.uniform();
    for (const auto& U : {UtilityFunction::log1p(1 + rng.uniform()), UtilityFunction::power(a)}) {
      const double got = admit_one(U, V, Q, 3);
      const double want = oracle::golden_section(
          [&](double r) { return V * U.value(r) - Q * r; }, 0, 3, 1e-10);
      CHECK(std::abs(got - want) < 1e-6);
    }
  }
}

TEST_CASE("admit_data fills only utility terms") {
  const auto sc = fixtures::seven_node();
  NetState s = NetState::initial(sc.network);
  s.q(1, 0) = 10;
  const auto R = admit_data(s, sc.utility, 30, 3);
  CHECK(R[0] == doctest::Approx(2.0));
  CHECK(R[1] == 3.0);
  CHECK(R[4] == 0.0);
  CHECK(R[6] == 0.0);
}

TEST_CASE("weights: perturbed backpressure and tie-break") {
  const NetworkSpec net(3, {{1, 2}}, {2, 3});
  NetState s = NetState::initial(net);
  s.q(1, 1) = 10;
  s.q(2, 1) = 1;
  auto w = compute_weights(s, net, 7);
  CHECK(w.W_c[1] == 2.0);
  CHECK(w.W[0] == 2.0);
  CHECK(w.best_flow[0] == 1);

  s.q(1, 1) = 8;
  CHECK(compute_weights(s, net, 7).W[0] == 0.0);

  s.q(1, 0) = 12;
  s.q(1, 1) = 13;
  w = compute_weights(s, net, 7);
  CHECK(w.W_c[0] == w.W_c[1]);
  CHECK(w.best_flow[0] == 0);
}

TEST_CASE("schedule: MaxWeight") {
  LinkWeights w;
  w.flow_count = 2;
  w.W_c = {2, 1};
  w.W = {2};
  w.best_flow = {0};
  std::vector<double> mu{3};
  CHECK(schedule(w, mu) == std::vector<double>{3, 0});
  w.W_c = {0, 0};
  w.W = {0};
  CHECK(schedule(w, mu) == std::vector<double>{0, 0});
}

namespace {

struct LinearNode {
  NetworkSpec net{3, {{1, 2}, {1, 3}}, {2}};
  SystemParams sys = fixtures::reference_system(1.0);
  RatePowerModel model{RateKind::linear_gain, 1, {1, 2}};
  AlgorithmParams params{30, 10, 7};
  ChannelState S = ChannelState::uniform(3, 1);
  LinkWeights w;

  LinearNode() {
    S.gain(1, 2) = 2;
    S.gain(1, 3) = 1;
    w.flow_count = 1;
    w.W_c = {2, 0};
    w.W = {2, 0};
    w.best_flow = {0, 0};
  }
};

}  // namespace

TEST_CASE("linear allocation: worked example") {
  LinearNode x;
  std::vector<double> E{9, 0, 0};  // (eta/xi)(E - Gamma) = -1
  const auto a = allocate_power(x.w, E, x.model, x.S, x.params, x.sys, x.net);
  CHECK(a.P == std::vector<double>{2, 0});
  CHECK(a.mu == std::vector<double>{4, 0});
  CHECK(a.objective == doctest::Approx(2 * 4 - 2));
}

TEST_CASE("linear allocation: no weight and low battery means silence") {
  LinearNode x;
  x.w.W = {0, 0};
  x.w.W_c = {0, 0};
  std::vector<double> E{5, 0, 0};
  const auto a = allocate_power(x.w, E, x.model, x.S, x.params, x.sys, x.net);
  CHECK(a.P == std::vector<double>{0, 0});
}

TEST_CASE("orthogonal allocation: spends the budget when energy is cheap") {
  LinearNode x;
  x.model.kind = RateKind::orthogonal_log;
  std::vector<double> E{100, 0, 0};
  const auto a = allocate_power(x.w, E, x.model, x.S, x.params, x.sys, x.net);
  CHECK(a.P[0] + a.P[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("firing thresholds under the linear model") {
  const auto sc = fixtures::seven_node();
  const auto& sys = sc.system;
  const auto params = AlgorithmParams::make(sys, 2, 30);
  const double lo = params.gamma - sys.xi / sys.eta * sys.delta1 * sys.g_max * params.V;
  const double hi = params.gamma + sys.xi / sys.eta * sys.delta2 * sys.g_max * params.V;
  random::CounterRng rng(17);
  int below = 0, above = 0;
  for (int t = 0; t < 2000; ++t) {
    NetState s = NetState::initial(sc.network);
    for (NodeId n = 1; n <= 6; ++n) s.q(n, 0) = 33 * rng.uniform();
    for (auto& e : s.E) e = 160 * rng.uniform();
    ChannelState S = ChannelState::uniform(7, 0);
    for (auto& g : S.gains) g = rng.uniform() < 0.5 ? 1 : 2;
    const auto w = compute_weights(s, sc.network, params.theta);
    const auto a = allocate_power(w, s.E, sc.rate_model, S, params, sys, sc.network);
    for (NodeId n = 1; n <= 6; ++n) {
      double total = 0;
      for (std::size_t l : sc.network.out_links(n)) total += a.P[l];
      if (s.e(n) < lo) {
        ++below;
        CHECK(total == 0.0);
      } else if (s.e(n) > hi) {
        ++above;
        CHECK(total == sys.P_max);
      }
    }
  }
  CHECK(below > 100);
  CHECK(above > 100);
}

TEST_CASE("allocate_power is never beaten by the grid oracle") {
  for (RateKind k : {RateKind::linear_gain, RateKind::orthogonal_log, RateKind::interference_log}) {
    const int count = k == RateKind::interference_log ? 25 : 60;
    for (int i = 0; i < count; ++i) {
      const auto x = instances::random_small(k, 1000 + i);
      const auto w = compute_weights(x.state, x.sc.network, x.params.theta);
      for (std::size_t l = 0; l < w.W.size(); ++l) {
        REQUIRE(w.W[l] == doctest::Approx(x.plain.weight[l]).epsilon(1e-14));
      }
      const auto a = allocate_power(w, x.state.E, x.sc.rate_model, x.S, x.params, x.sc.system,
                                    x.sc.network);
      const double ours = oracle::objective(x.plain, a.P);
      const double best = oracle::grid_power(x.plain, 50).objective;
      CAPTURE(to_string(k));
      CAPTURE(i);
      CHECK(ours >= best - 1e-3 * std::max(1.0, std::abs(best)));
      CHECK(a.objective == doctest::Approx(ours).epsilon(1e-12));
    }
  }
}

TEST_CASE("coordinate ascent reports a sweep cap as a solver failure") {
  const auto x = instances::random_small(RateKind::interference_log, 4242);
  auto w = compute_weights(x.state, x.sc.network, x.params.theta);
  for (auto& v : w.W) v += 5;
  SolverOptions opts;
  opts.max_sweeps = 1;
  std::vector<double> E(x.state.E.size(), 200.0);
  CHECK_THROWS_AS(
      allocate_power(w, E, x.sc.rate_model, x.S, x.params, x.sc.system, x.sc.network, opts),
      SolverError);
}

TEST_CASE("step: cold start admits fully and stays silent") {
  const auto sc = fixtures::seven_node();
  const auto params = AlgorithmParams::make(sc.system, 2, 30);
  const NetState s = NetState::initial(sc.network);
  EnvSample env{std::vector<double>(7, 5), ChannelState::uniform(7, 2)};
  const auto d = step(sc, params, s, env);
  for (double p : d.P) CHECK(p == 0.0);
  for (int n = 0; n < 4; ++n) CHECK(d.R[n] == 3.0);
}

TEST_CASE("step: a lone node only admits") {
  Scenario sc;
  sc.network = NetworkSpec(1, {}, {1});
  sc.system = fixtures::reference_system();
  sc.rate_model.channel_domain = {1};
  derive_constants(sc);
  sc.system.delta1 = 2;
  const auto params = AlgorithmParams::make(sc.system, 1, 30);
  NetState s = NetState::initial(sc.network);
  EnvSample env{{5}, ChannelState::uniform(1, 0)};
  const auto d = step(sc, params, s, env);
  CHECK(d.P.empty());
  CHECK(d.R.size() == 1);
}

TEST_CASE("ProposedController exposes its queue bound") {
  const auto sc = fixtures::seven_node();
  const auto p = make_policy(sc, Algorithm::proposed, 30);
  REQUIRE(p->queue_bound());
  CHECK(*p->queue_bound() == 33.0);
  CHECK(p->name() == "proposed");
}
