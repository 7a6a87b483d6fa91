#include "ehnet/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehnet/errors.hpp"
#include "ehnet/kernels.hpp"
#include "ehnet/random.hpp"

namespace ehnet {

// ----------------------------------------------------------------- admission

namespace {

constexpr double kInvPhi = 0.6180339887498948482;

double golden_admission(const UtilityFunction& U, double V, double Q, double R_max) {
  auto f = [&](double r) { return V * U.value(r) - Q * r; };
  double a = 0, b = R_max;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  const double fa0 = f(a), fb0 = f(b);
  while (b - a > 1e-9 * std::max(1.0, R_max)) {
    if (fc < std::min(f(a), f(b)) - 1e-12 * (1 + std::abs(fc))) {
      throw SolverError("admission objective is not unimodal on [0, R_max] for " + U.name());
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  double fbest = f(best);
  if (fa0 >= fbest) {
    best = 0;
    fbest = fa0;
  }
  if (fb0 > fbest) best = R_max;
  return best;
}

}  // namespace

double admit_one(const UtilityFunction& U, double V, double Q, double R_max) {
  if (!(V > 0)) throw ValidationError("admission needs V > 0");
  if (Q <= 0) return R_max;
  if (U.form() == UtilityFunction::Form::log1p) {
    // d/dR [V w ln(1+R) - Q R] = 0  =>  R = V w / Q - 1
    return std::clamp(V * U.weight() / Q - 1.0, 0.0, R_max);
  }
  return golden_admission(U, V, Q, R_max);
}

std::vector<double> admit_data(const NetState& state, const UtilitySpec& utility, double V,
                               double R_max) {
  std::vector<double> R(state.node_count * state.flow_count, 0.0);
  for (const auto& t : utility.terms) {
    R[(t.node - 1) * state.flow_count + t.flow] = admit_one(t.fn, V, state.q(t.node, t.flow), R_max);
  }
  return R;
}

// ------------------------------------------------------------------- weights

LinkWeights compute_weights(const NetState& state, const NetworkSpec& net, double theta) {
  const std::size_t L = net.link_count();
  const std::size_t F = state.flow_count;
  LinkWeights w;
  w.flow_count = F;
  std::vector<double> from(L * F), to(L * F);
  for (std::size_t l = 0; l < L; ++l) {
    const Link& k = net.links()[l];
    for (std::size_t f = 0; f < F; ++f) {
      from[l * F + f] = state.q(k.from, f);
      to[l * F + f] = state.q(k.to, f);
    }
  }
  w.W_c.assign(L * F, 0.0);
  kernels::perturbed_backpressure(from, to, theta, w.W_c);

  w.W.assign(L, 0.0);
  w.best_flow.assign(L, 0);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t f = 0; f < F; ++f) {
      if (w.W_c[l * F + f] > w.W[l]) {
        w.W[l] = w.W_c[l * F + f];
        w.best_flow[l] = f;
      }
    }
  }
  return w;
}

// --------------------------------------------------------------------- power

namespace {

std::vector<double> energy_prices(std::span<const double> E, const AlgorithmParams& params,
                                  const SystemParams& sys) {
  std::vector<double> c(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) c[i] = (sys.eta / sys.xi) * (E[i] - params.gamma);
  return c;
}

void allocate_linear(const LinkWeights& w, std::span<const double> price, const ChannelState& S,
                     const SystemParams& sys, const NetworkSpec& net, std::vector<double>& P) {
  const std::size_t L = net.link_count();
  std::vector<double> gain(L), term(L), kappa(L);
  for (std::size_t l = 0; l < L; ++l) {
    const Link& k = net.links()[l];
    gain[l] = S.gain(k.from, k.to);
    term[l] = price[k.from - 1];
  }
  kernels::linear_coefficients(w.W, gain, term, kappa);
  for (NodeId n = 1; n <= net.node_count(); ++n) {
    auto outs = net.out_links(n);
    if (outs.empty()) continue;
    std::size_t best = outs[0];
    for (std::size_t l : outs) {
      if (kappa[l] > kappa[best]) best = l;
    }
    if (kappa[best] > 0) P[best] = sys.P_max;
  }
}

// maximize sum_m W_m ln(1 + a_m P_m) + c sum_m P_m  s.t. sum_m P_m <= budget
void water_fill(std::span<const double> W, std::span<const double> a, double c, double budget,
                std::span<double> P) {
  std::fill(P.begin(), P.end(), 0.0);
  double top = 0;  // largest marginal at zero power, excluding c
  for (std::size_t m = 0; m < W.size(); ++m) {
    if (W[m] > 0 && a[m] > 0) top = std::max(top, W[m] * a[m]);
  }
  if (top == 0) {
    if (c > 0 && !P.empty()) P[0] = budget;
    return;
  }
  auto fill = [&](double lambda) {
    double total = 0;
    for (std::size_t m = 0; m < W.size(); ++m) {
      P[m] = 0;
      if (W[m] > 0 && a[m] > 0) P[m] = std::max(0.0, W[m] / (lambda - c) - 1.0 / a[m]);
      total += P[m];
    }
    return total;
  };
  if (c < 0 && fill(0.0) <= budget) return;

  double lo = std::max(c, 0.0);
  double hi = c + top;
  if (hi <= lo) {
    // every marginal is already below the price floor
    std::fill(P.begin(), P.end(), 0.0);
    return;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fill(mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double total = fill(hi);
  if (total > 0 && (c > 0 || total > budget || lo > std::max(c, 0.0))) {
    // the budget binds: land exactly on it
    const double scale = budget / total;
    for (double& p : P) p *= scale;
  }
}

void allocate_orthogonal(const LinkWeights& w, std::span<const double> price, const ChannelState& S,
                         const RatePowerModel& model, const SystemParams& sys,
                         const NetworkSpec& net, std::vector<double>& P) {
  for (NodeId n = 1; n <= net.node_count(); ++n) {
    auto outs = net.out_links(n);
    if (outs.empty()) continue;
    std::vector<double> W(outs.size()), a(outs.size()), p(outs.size());
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const Link& k = net.links()[outs[i]];
      W[i] = w.W[outs[i]];
      a[i] = S.gain(k.from, k.to) / model.noise_variance;
    }
    water_fill(W, a, price[n - 1], sys.P_max, p);
    for (std::size_t i = 0; i < outs.size(); ++i) P[outs[i]] = p[i];
  }
}

double objective_with(const LinkWeights& w, std::span<const double> price,
                      const RatePowerModel& model, const ChannelState& S, const NetworkSpec& net,
                      std::span<const double> P) {
  const std::vector<double> mu = rate(model, net, S, P);
  double g = 0;
  for (std::size_t l = 0; l < P.size(); ++l) {
    g += w.W[l] * mu[l] + price[net.links()[l].from - 1] * P[l];
  }
  return g;
}

void allocate_interference(const LinkWeights& w, std::span<const double> price,
                           const ChannelState& S, const RatePowerModel& model,
                           const SystemParams& sys, const NetworkSpec& net,
                           const SolverOptions& opts, std::vector<double>& best_P) {
  const std::size_t L = net.link_count();
  auto G = [&](std::span<const double> P) { return objective_with(w, price, model, S, net, P); };
  double best_value = -kUnlimited;

  // Maximize G along x in [0, span] for the move `set`: a coarse grid, then
  // golden-section inside the best cell. Accepted only if strictly better.
  auto line_search = [&](std::vector<double>& P, double& value, double span, auto set) {
    std::vector<double> trial = P;
    auto at = [&](double x) {
      set(trial, x);
      return G(trial);
    };
    constexpr int kGrid = 16;
    double bx = -1, bv = value;
    int bi = -1;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = span * i / kGrid;
      const double v = at(x);
      if (v > bv) {
        bv = v;
        bx = x;
        bi = i;
      }
    }
    if (bi < 0) return;
    double lo = span * std::max(0, bi - 1) / kGrid;
    double hi = span * std::min(kGrid, bi + 1) / kGrid;
    double c = hi - kInvPhi * (hi - lo), d = lo + kInvPhi * (hi - lo);
    double fc = at(c), fd = at(d);
    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, span); ++it) {
      if (fc >= fd) {
        hi = d; d = c; fd = fc;
        c = hi - kInvPhi * (hi - lo);
        fc = at(c);
      } else {
        lo = c; c = d; fc = fd;
        d = lo + kInvPhi * (hi - lo);
        fd = at(d);
      }
    }
    const double x = 0.5 * (lo + hi);
    const double v = at(x);
    if (v > bv) {
      bv = v;
      bx = x;
    }
    set(P, bx);
    value = bv;
  };

  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    std::vector<double> P(L, 0.0);
    if (r == 1) {
      // greedy start: whole budget on each node's heaviest link
      for (NodeId n = 1; n <= net.node_count(); ++n) {
        auto outs = net.out_links(n);
        if (outs.empty()) continue;
        std::size_t pick = outs[0];
        for (std::size_t l : outs) {
          const Link& k = net.links()[l];
          const Link& kp = net.links()[pick];
          if (w.W[l] * S.gain(k.from, k.to) > w.W[pick] * S.gain(kp.from, kp.to)) pick = l;
        }
        P[pick] = sys.P_max;
      }
    } else if (r >= 2) {
      random::CounterRng rng(static_cast<std::uint64_t>(r), 0x636f6f7264ULL);
      for (NodeId n = 1; n <= net.node_count(); ++n) {
        auto outs = net.out_links(n);
        double left = sys.P_max * rng.uniform();
        for (std::size_t l : outs) {
          P[l] = left * rng.uniform();
          left -= P[l];
        }
      }
    }

    double value = G(P);
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      const double before = value;
      for (std::size_t l = 0; l < L; ++l) {
        const NodeId n = net.links()[l].from;
        double others = 0;
        for (std::size_t k : net.out_links(n)) {
          if (k != l) others += P[k];
        }
        const double budget = std::max(0.0, sys.P_max - others);
        line_search(P, value, budget, [&](std::vector<double>& Q, double x) { Q[l] = x; });
      }
      // shift power between two links of one node at fixed total; single
      // coordinates cannot leave a vertex where one link holds the budget
      for (NodeId n = 1; n <= net.node_count(); ++n) {
        auto outs = net.out_links(n);
        for (std::size_t i = 0; i < outs.size(); ++i) {
          for (std::size_t j = i + 1; j < outs.size(); ++j) {
            const std::size_t a = outs[i], b = outs[j];
            const double total = P[a] + P[b];
            if (total <= 0) continue;
            line_search(P, value, total, [&](std::vector<double>& Q, double x) {
              Q[a] = x;
              Q[b] = total - x;
            });
          }
        }
      }
      if (value - before <= opts.tolerance * std::max(1.0, std::abs(before))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "coordinate ascent did not converge in " << opts.max_sweeps
         << " sweeps (restart " << r << ", objective " << value << ")";
      throw SolverError(os.str());
    }
    if (value > best_value) {
      best_value = value;
      best_P = P;
    }
  }
}

}  // namespace

double power_objective(const LinkWeights& w, std::span<const double> E, const RatePowerModel& model,
                       const ChannelState& S, const AlgorithmParams& params,
                       const SystemParams& sys, const NetworkSpec& net, std::span<const double> P) {
  const std::vector<double> price = energy_prices(E, params, sys);
  return objective_with(w, price, model, S, net, P);
}

PowerAllocation allocate_power(const LinkWeights& w, std::span<const double> E,
                               const RatePowerModel& model, const ChannelState& S,
                               const AlgorithmParams& params, const SystemParams& sys,
                               const NetworkSpec& net, const SolverOptions& opts) {
  const std::vector<double> price = energy_prices(E, params, sys);
  PowerAllocation out;
  out.P.assign(net.link_count(), 0.0);
  switch (model.kind) {
    case RateKind::linear_gain: allocate_linear(w, price, S, sys, net, out.P); break;
    case RateKind::orthogonal_log: allocate_orthogonal(w, price, S, model, sys, net, out.P); break;
    case RateKind::interference_log:
      allocate_interference(w, price, S, model, sys, net, opts, out.P);
      break;
  }
  out.mu = rate(model, net, S, out.P);
  out.objective = objective_with(w, price, model, S, net, out.P);
  return out;
}

std::vector<double> schedule(const LinkWeights& w, std::span<const double> mu) {
  const std::size_t F = w.flow_count;
  std::vector<double> mu_c(w.W.size() * F, 0.0);
  for (std::size_t l = 0; l < w.W.size(); ++l) {
    if (w.W[l] > 0) mu_c[l * F + w.best_flow[l]] = mu[l];
  }
  return mu_c;
}

// ---------------------------------------------------------------- controller

ProposedController::ProposedController(const Scenario& scenario, AlgorithmParams params,
                                       SolverOptions opts)
    : scenario_(scenario), params_(params), opts_(opts) {}

std::optional<double> ProposedController::queue_bound() const {
  return scenario_.system.g_max * params_.V + scenario_.system.R_max;
}

SlotDecision ProposedController::decide(const NetState& state, const EnvSample& env) const {
  return step(scenario_, params_, state, env, opts_);
}

SlotDecision step(const Scenario& sc, const AlgorithmParams& params, const NetState& state,
                  const EnvSample& env, const SolverOptions& opts) {
  const NetworkSpec& net = sc.network;
  const SystemParams& sys = sc.system;
  SlotDecision d = SlotDecision::zero(net);
  d.R = admit_data(state, sc.utility, params.V, sys.R_max);
  const LinkWeights w = compute_weights(state, net, params.theta);
  PowerAllocation alloc = allocate_power(w, state.E, sc.rate_model, env.channel, params, sys, net, opts);
  d.P = std::move(alloc.P);
  d.mu_link = std::move(alloc.mu);
  d.mu_c = schedule(w, d.mu_link);

  for (NodeId n = 1; n <= net.node_count(); ++n) {
    if (sys.xi * sys.eta * state.e(n) < sys.P_max && d.node_power(net, n) > 0) {
      std::ostringstream os;
      os << "slot " << state.slot << ": node " << n << " has E=" << state.e(n)
         << " (xi*eta*E < P_max) but was allocated power " << d.node_power(net, n);
      throw InvariantViolation(os.str());
    }
  }
  return d;
}

}  // namespace ehnet
