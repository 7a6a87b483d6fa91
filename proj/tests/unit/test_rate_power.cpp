#include <doctest.h>

#include <cmath>

#include "ehnet/errors.hpp"
#include "ehnet/rate_power.hpp"
#include "ehnet/utility.hpp"
#include "fixtures.hpp"

using namespace ehnet;

namespace {

RatePowerModel model(RateKind k, std::vector<double> domain, double noise = 1) {
  RatePowerModel m;
  m.kind = k;
  m.channel_domain = std::move(domain);
  m.noise_variance = noise;
  return m;
}

}  // namespace

TEST_CASE("rate: spot values") {
  const NetworkSpec net(2, {{1, 2}}, {2});
  ChannelState S = ChannelState::uniform(2, 2);
  std::vector<double> P{1};
  CHECK(rate(model(RateKind::linear_gain, {1, 2}), net, S, P)[0] == 2.0);
  S = ChannelState::uniform(2, 1);
  CHECK(rate(model(RateKind::orthogonal_log, {1}), net, S, P)[0] == doctest::Approx(std::log(2.0)));
  std::vector<double> zero{0};
  for (RateKind k : {RateKind::linear_gain, RateKind::orthogonal_log, RateKind::interference_log}) {
    CHECK(rate(model(k, {1, 2}), net, S, zero)[0] == 0.0);
  }
  std::vector<double> neg{-1};
  CHECK_THROWS_AS(rate(model(RateKind::linear_gain, {1}), net, S, neg), ValidationError);
  CHECK_THROWS_AS(rate(model(RateKind::orthogonal_log, {1}, 0), net, S, P), ValidationError);
}

TEST_CASE("rate: interference from other senders lowers the rate") {
  const NetworkSpec net(4, {{1, 3}, {2, 4}}, {3, 4});
  ChannelState S = ChannelState::uniform(4, 1);
  std::vector<double> P{1, 0};
  const auto m = model(RateKind::interference_log, {1});
  const double alone = rate(m, net, S, P)[0];
  P[1] = 1;
  CHECK(rate(m, net, S, P)[0] == doctest::Approx(std::log1p(0.5)));
  CHECK(alone == doctest::Approx(std::log(2.0)));
}

TEST_CASE("sensitivity constants") {
  const auto net = fixtures::seven_node_network();
  auto s = sensitivity_constants(model(RateKind::linear_gain, {1, 2}), net);
  CHECK(s.delta1 == 2.0);
  CHECK(s.delta2 == 0.0);
  s = sensitivity_constants(model(RateKind::orthogonal_log, {1, 4}), net);
  CHECK(s.delta1 == 4.0);
  CHECK(s.delta2 == 0.0);
  s = sensitivity_constants(model(RateKind::interference_log, {1}), NetworkSpec(2, {{1, 2}}, {2}));
  CHECK(s.delta2 == 0.0);
  CHECK_THROWS_AS(sensitivity_constants(model(RateKind::linear_gain, {1, INFINITY}), net),
                  ValidationError);
}

TEST_CASE("property check passes for the shipped models with declared constants") {
  const auto net = fixtures::seven_node_network();
  for (RateKind k : {RateKind::linear_gain, RateKind::orthogonal_log, RateKind::interference_log}) {
    CAPTURE(to_string(k));
    const auto m = model(k, {1, 2});
    const auto rep = check_properties(m, net, sensitivity_constants(m, net), 2.0, 1000, 3);
    for (const auto& c : rep.counterexamples) MESSAGE(c.property << ": " << c.detail);
    CHECK(rep.ok());
  }
}

TEST_CASE("property check: orthogonal spreading bound is tight at zero") {
  const auto net = fixtures::seven_node_network();
  const auto m = model(RateKind::orthogonal_log, {1, 2});
  const auto rep = check_properties(m, net, {2, 0}, 2.0, 500, 5);
  CHECK(rep.ok());
  CHECK(rep.tightest_delta2 == 0.0);
}

TEST_CASE("property check: an understated slope bound is caught") {
  const auto net = fixtures::seven_node_network();
  const auto m = model(RateKind::interference_log, {1, 2});
  Sensitivity s = sensitivity_constants(m, net);
  s.delta1 /= 2;
  const auto rep = check_properties(m, net, s, 2.0, 1000, 7);
  CHECK_FALSE(rep.ok());
  bool slope = false;
  for (const auto& c : rep.counterexamples) slope |= c.property == "delta1";
  CHECK(slope);
}

TEST_CASE("property check: self-interference can break spreading monotonicity") {
  // A sender with two out-links: raising its power on one link interferes
  // with its own other link. Reported, not hidden.
  const NetworkSpec net(3, {{1, 2}, {1, 3}}, {2, 3});
  const auto m = model(RateKind::interference_log, {1, 2});
  const auto rep = check_properties(m, net, sensitivity_constants(m, net), 2.0, 2000, 11);
  bool spread = false;
  for (const auto& c : rep.counterexamples) spread |= c.property == "spread";
  CHECK(spread);
}

TEST_CASE("peak rate") {
  CHECK(model(RateKind::linear_gain, {1, 2}).peak_rate(2) == 4.0);
  CHECK(model(RateKind::orthogonal_log, {1}).peak_rate(1) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("utilities: values, derivatives, concavity") {
  const auto u = UtilityFunction::log1p();
  CHECK(u.value(1) == doctest::Approx(std::log(2.0)));
  CHECK(u.max_derivative() == 1.0);
  const auto p = UtilityFunction::power(0.5, 2.0);
  CHECK(p.value(3) == doctest::Approx(2.0 * (2.0 - 1.0) / 0.5));
  CHECK(p.max_derivative() == 2.0);
  CHECK_THROWS_AS(UtilityFunction::power(1.5), ValidationError);
  CHECK_THROWS_AS(UtilityFunction::parse("cubic", 1, 0), ValidationError);

  UtilitySpec spec{{{1, 0, u}, {2, 0, p}}};
  CHECK(spec.g_max() == 2.0);
  CHECK(check_concavity(spec, 3.0).ok);
}
