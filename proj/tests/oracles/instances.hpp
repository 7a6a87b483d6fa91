#pragma once

// Random small power-allocation instances, in both the library's types and
// the oracle's plain form. Weights and prices are recomputed here from the
// raw queues rather than taken from the library.

#include <algorithm>
#include <cmath>

#include "ehnet/controller.hpp"
#include "ehnet/random.hpp"
#include "oracles/oracles.hpp"

namespace instances {

struct Small {
  ehnet::Scenario sc;
  ehnet::NetState state;
  ehnet::ChannelState S;
  ehnet::AlgorithmParams params;
  oracle::Instance plain;
};

inline oracle::Kind plain_kind(ehnet::RateKind k) {
  switch (k) {
    case ehnet::RateKind::linear_gain: return oracle::Kind::linear;
    case ehnet::RateKind::orthogonal_log: return oracle::Kind::orthogonal;
    case ehnet::RateKind::interference_log: return oracle::Kind::interference;
  }
  return oracle::Kind::linear;
}

/// Up to 3 senders with 1-2 out-links each. For the interference model at
/// most one sender gets two links so the oracle's product grid stays small.
inline Small random_small(ehnet::RateKind kind, std::uint64_t seed) {
  using namespace ehnet;
  random::CounterRng rng(seed, 0x736d616c6cULL);
  Small x;
  const int N = 3 + static_cast<int>(rng.below(3));
  const int senders = 1 + static_cast<int>(rng.below(3));
  std::vector<Link> links;
  int two_link = 0;
  for (int n = 1; n <= senders; ++n) {
    int k = 1 + static_cast<int>(rng.below(2));
    if (kind == RateKind::interference_log && k == 2 && two_link++ > 0) k = 1;
    std::vector<NodeId> targets;
    for (NodeId m = 1; m <= N; ++m) {
      if (m != n) targets.push_back(m);
    }
    for (int i = 0; i < k; ++i) {
      const std::size_t j = rng.below(targets.size());
      links.push_back({n, targets[j]});
      targets.erase(targets.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  const int F = 1 + static_cast<int>(rng.below(2));
  std::vector<NodeId> flows;
  for (int f = 0; f < F; ++f) flows.push_back(N - f);

  x.sc.network = NetworkSpec(N, links, flows);
  x.sc.system.R_max = 3;
  x.sc.system.P_max = 1 + 2 * rng.uniform();
  x.sc.system.mu_max = 2;
  x.sc.system.E_max = 200;
  x.sc.system.xi = 0.8 + 0.2 * rng.uniform();
  x.sc.system.eta = 0.9 + 0.1 * rng.uniform();
  x.sc.system.e_max = 1;
  x.sc.system.g_max = 1;
  x.sc.rate_model.kind = kind;
  x.sc.rate_model.channel_domain = {0.5, 1, 2};
  x.sc.rate_model.noise_variance = 0.5 + rng.uniform();

  x.state = NetState::initial(x.sc.network);
  for (auto& q : x.state.Q) q = 40 * rng.uniform();
  for (std::size_t f = 0; f < static_cast<std::size_t>(F); ++f) x.state.q(flows[f], f) = 0;
  for (auto& e : x.state.E) e = 100 * rng.uniform();

  x.S = ChannelState::uniform(N, 0);
  for (NodeId a = 1; a <= N; ++a) {
    for (NodeId b = 1; b <= N; ++b) {
      if (a != b) x.S.gain(a, b) = x.sc.rate_model.channel_domain[rng.below(3)];
    }
  }
  x.params.V = 10;
  x.params.gamma = 30 + 40 * rng.uniform();
  x.params.theta = 5 * rng.uniform();

  oracle::Instance& p = x.plain;
  p.kind = plain_kind(kind);
  p.nodes = N;
  p.noise = x.sc.rate_model.noise_variance;
  p.P_max = x.sc.system.P_max;
  p.gain = x.S.gains;
  for (const Link& l : x.sc.network.links()) {
    p.links.push_back({l.from, l.to});
    double w = 0;
    for (std::size_t f = 0; f < static_cast<std::size_t>(F); ++f) {
      w = std::max(w, x.state.q(l.from, f) - x.state.q(l.to, f) - x.params.theta);
    }
    p.weight.push_back(w);
  }
  for (NodeId n = 1; n <= N; ++n) {
    p.price.push_back(x.sc.system.eta / x.sc.system.xi * (x.state.e(n) - x.params.gamma));
  }
  return x;
}

}  // namespace instances
