#include "ehnet/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "ehnet/errors.hpp"

namespace ehnet {

EsaParams EsaParams::make(const SystemParams& sys, double V) {
  if (!(V > 0)) throw ValidationError("ESA needs V > 0");
  EsaParams p;
  p.V = V;
  p.harvest_cutoff = sys.delta1 * sys.g_max * V + sys.P_max;
  if (!(p.harvest_cutoff > 0)) throw ValidationError("ESA harvest cutoff must be > 0");
  return p;
}

namespace {

// Battery room left after this slot's leakage and spending.
double overflow_room(const SystemParams& sys, double E, double spent) {
  return std::max(0.0, sys.E_max - (sys.eta * E - spent / sys.xi));
}

}  // namespace

SlotDecision esa_step(const Scenario& sc, const EsaParams& params, const NetState& state,
                      const EnvSample& env, const SolverOptions& opts) {
  const NetworkSpec& net = sc.network;
  const SystemParams& sys = sc.system;
  SlotDecision d = SlotDecision::zero(net);
  d.R = admit_data(state, sc.utility, params.V, sys.R_max);

  SystemParams ideal = sys;
  ideal.xi = 1;
  ideal.eta = 1;
  AlgorithmParams rule;
  rule.V = params.V;
  rule.gamma = params.harvest_cutoff;
  rule.theta = perturbation_theta(sys, net.d_max());

  const LinkWeights w = compute_weights(state, net, rule.theta);
  PowerAllocation alloc =
      allocate_power(w, state.E, sc.rate_model, env.channel, rule, ideal, net, opts);
  d.P = std::move(alloc.P);

  // the real battery cannot supply more than xi*eta*E
  for (NodeId n = 1; n <= net.node_count(); ++n) {
    const double want = d.node_power(net, n);
    const double have = sys.xi * sys.eta * state.e(n);
    if (want > have) {
      const double scale = want > 0 ? have / want : 0.0;
      for (std::size_t l : net.out_links(n)) d.P[l] *= scale;
    }
  }
  d.mu_link = rate(sc.rate_model, net, env.channel, d.P);
  d.mu_c = schedule(w, d.mu_link);

  for (NodeId n = 1; n <= net.node_count(); ++n) {
    const double E = state.e(n);
    d.harvest_limit[n - 1] = std::min(std::max(0.0, params.harvest_cutoff - E),
                                      overflow_room(sys, E, d.node_power(net, n)));
  }
  return d;
}

SlotDecision greedy_step(const Scenario& sc, const NetState& state, const EnvSample& env) {
  const NetworkSpec& net = sc.network;
  const SystemParams& sys = sc.system;
  const std::size_t F = net.flow_count();
  const std::size_t N = static_cast<std::size_t>(net.node_count());
  SlotDecision d = SlotDecision::zero(net);

  std::vector<NodeId> order(N);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return state.node_backlog(a) > state.node_backlog(b);
  });

  std::vector<bool> busy(N + 1, false);
  std::vector<std::ptrdiff_t> chosen(N + 1, -1);
  for (NodeId n : order) {
    if (state.node_backlog(n) <= 0 || busy[n]) continue;
    const double power = std::min(sys.P_max, sys.xi * sys.eta * state.e(n));
    if (power <= 0) continue;
    std::ptrdiff_t pick = -1;
    for (std::size_t l : net.out_links(n)) {
      const NodeId m = net.links()[l].to;
      if (busy[m]) continue;
      if (pick < 0 || env.channel.gain(n, m) > env.channel.gain(n, net.links()[pick].to)) {
        pick = static_cast<std::ptrdiff_t>(l);
      }
    }
    if (pick < 0) continue;
    busy[n] = true;
    busy[net.links()[pick].to] = true;
    chosen[n] = pick;
    d.P[pick] = power;
  }

  d.mu_link = rate(sc.rate_model, net, env.channel, d.P);
  std::vector<std::size_t> flow_of(N + 1, 0);
  for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
    if (chosen[n] < 0) continue;
    std::size_t best = 0;
    for (std::size_t f = 1; f < F; ++f) {
      if (state.q(n, f) > state.q(n, best)) best = f;
    }
    flow_of[n] = best;
    d.mu_c[chosen[n] * F + best] = d.mu_link[chosen[n]];
  }

  for (const auto& t : sc.utility.terms) {
    double r = 0;
    if (state.q(t.node, t.flow) == 0) {
      r = sys.R_max;
    } else if (chosen[t.node] >= 0 && flow_of[t.node] == t.flow) {
      r = std::min(d.mu_link[chosen[t.node]], sys.R_max);
    }
    d.R[(t.node - 1) * F + t.flow] = r;
  }

  for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
    d.harvest_limit[n - 1] = overflow_room(sys, state.e(n), d.node_power(net, n));
  }
  return d;
}

}  // namespace ehnet
