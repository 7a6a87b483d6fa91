#include "ehnet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ehnet/controller.hpp"
#include "ehnet/errors.hpp"
#include "ehnet/random.hpp"

namespace ehnet {

namespace {

constexpr double kTol = 1e-9;

std::string dump(const NetworkSpec& net, const NetState& s, const EnvSample& env,
                 const SlotDecision& d) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t F = s.flow_count;
  os << "\n  state at slot " << s.slot << ":";
  for (NodeId n = 1; n <= net.node_count(); ++n) {
    os << "\n    node " << n << ": E=" << s.e(n) << " harvest=" << env.harvest[n - 1] << " Q=[";
    for (std::size_t f = 0; f < F; ++f) os << (f ? "," : "") << s.q(n, f);
    os << "] R=[";
    for (std::size_t f = 0; f < F; ++f) os << (f ? "," : "") << d.R[(n - 1) * F + f];
    os << "]";
    for (std::size_t l : net.out_links(n)) {
      const NodeId m = net.links()[l].to;
      os << " ->" << m << "(S=" << env.channel.gain(n, m) << " P=" << d.P[l]
         << " mu=" << d.mu_link[l] << ")";
    }
  }
  return os.str();
}

struct Checker {
  const Scenario& sc;
  std::optional<double> q_bound;
  std::int64_t checks = 0;

  void fail(const std::string& what, const NetState& s, const EnvSample& env,
            const SlotDecision& d) const {
    throw InvariantViolation("slot " + std::to_string(s.slot) + ": " + what +
                             dump(sc.network, s, env, d));
  }

  void decision(const NetState& s, const EnvSample& env, const SlotDecision& d) {
    const NetworkSpec& net = sc.network;
    const SystemParams& sys = sc.system;
    const std::size_t F = s.flow_count;
    for (double r : d.R) {
      ++checks;
      if (!(r >= -kTol && r <= sys.R_max + kTol)) fail("admission outside [0, R_max]", s, env, d);
    }
    for (NodeId n = 1; n <= net.node_count(); ++n) {
      double total = 0;
      for (std::size_t l : net.out_links(n)) {
        if (!(d.P[l] >= 0)) fail("negative power on a link of node " + std::to_string(n), s, env, d);
        total += d.P[l];
      }
      checks += 2;
      if (total > sys.P_max + kTol) fail("node " + std::to_string(n) + " exceeds P_max", s, env, d);
      if (total > sys.xi * sys.eta * s.e(n) + kTol) {
        fail("node " + std::to_string(n) + " spends more than xi*eta*E", s, env, d);
      }
    }
    for (std::size_t l = 0; l < net.link_count(); ++l) {
      double sum = 0;
      for (std::size_t f = 0; f < F; ++f) sum += d.mu_c[l * F + f];
      ++checks;
      if (sum > d.mu_link[l] + kTol) fail("flow rates exceed the link rate", s, env, d);
    }
  }

  void transition(const NetState& s, const EnvSample& env, const SlotDecision& d,
                  const QueueUpdate& u) {
    const SystemParams& sys = sc.system;
    for (double e : u.next.E) {
      ++checks;
      if (!(e >= 0 && e <= sys.E_max)) fail("battery outside [0, E_max]", s, env, d);
    }
    for (double q : u.next.Q) {
      ++checks;
      if (!(q >= 0)) fail("negative backlog", s, env, d);
      if (q_bound && q > *q_bound + kTol) {
        fail("backlog " + std::to_string(q) + " above the bound " + std::to_string(*q_bound), s,
             env, d);
      }
    }
    // total backlog changes by admissions minus deliveries, flow by flow
    const std::size_t F = s.flow_count;
    for (std::size_t f = 0; f < F; ++f) {
      double before = 0, after = 0, in = 0;
      for (std::size_t i = 0; i < s.node_count; ++i) {
        before += s.Q[i * F + f];
        after += u.next.Q[i * F + f];
        in += d.R[i * F + f];
      }
      ++checks;
      const double err = after - (before + in - u.delivered[f]);
      if (std::abs(err) > 1e-9 * (1 + before + in)) {
        fail("packet conservation broken for flow index " + std::to_string(f), s, env, d);
      }
    }
  }
};

}  // namespace

RunTrace run(const Scenario& sc, const Policy& policy, const Environment& environment,
             const RunOptions& opts) {
  if (opts.horizon < 0) throw ValidationError("horizon must be >= 0");
  const NetworkSpec& net = sc.network;
  const std::size_t N = static_cast<std::size_t>(net.node_count());
  const std::size_t F = net.flow_count();

  RunTrace trace;
  RunMetrics& m = trace.metrics;
  m.horizon = opts.horizon;
  m.mean_rate.assign(N * F, 0.0);
  NetState state = NetState::initial(net);
  m.min_energy = sc.system.E_max;
  if (opts.record_trace) trace.slots.reserve(static_cast<std::size_t>(opts.horizon));

  Checker check{sc, policy.queue_bound()};
  double slot_utility_sum = 0;
  for (std::int64_t t = 0; t < opts.horizon; ++t) {
    state.slot = t;
    EnvSample env = environment.sample(t, state);
    SlotDecision d = policy.decide(state, env);
    check.decision(state, env, d);
    QueueUpdate u;
    try {
      u = update_queues(state, d, env, sc.system, net);
    } catch (const InvariantViolation& e) {
      check.fail(e.what(), state, env, d);
    }
    check.transition(state, env, d, u);

    const double utility = sc.utility.total(d.R, F);
    slot_utility_sum += utility;
    double admitted = 0, delivered = 0;
    for (std::size_t i = 0; i < d.R.size(); ++i) {
      m.mean_rate[i] += d.R[i];
      admitted += d.R[i];
    }
    for (double x : u.delivered) delivered += x;
    m.admitted += admitted;
    m.delivered += delivered;
    for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
      if (net.is_terminal(n)) continue;
      m.harvest_available += sc.system.xi * env.harvest[n - 1];
      m.harvest_stored += u.harvested[n - 1];
    }
    for (double q : u.next.Q) m.max_backlog = std::max(m.max_backlog, q);
    for (double e : u.next.E) {
      m.min_energy = std::min(m.min_energy, e);
      m.max_energy = std::max(m.max_energy, e);
    }

    if (opts.record_trace) {
      trace.slots.push_back(
          {std::move(state), std::move(env), std::move(d), u.harvested, utility, admitted, delivered});
    }
    state = std::move(u.next);
  }
  state.slot = opts.horizon;

  if (opts.horizon > 0) {
    for (double& r : m.mean_rate) r /= static_cast<double>(opts.horizon);
    m.mean_slot_utility = slot_utility_sum / static_cast<double>(opts.horizon);
  } else {
    m.min_energy = 0;
  }
  m.utility = sc.utility.total(m.mean_rate, F);
  m.energy_utilization = m.harvest_available > 0 ? m.harvest_stored / m.harvest_available : 1.0;
  m.invariant_checks = check.checks;
  trace.final_state = std::move(state);
  return trace;
}

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

namespace {

[[noreturn]] void rethrow_with_run(std::exception_ptr ep, int index, std::uint64_t seed) {
  const std::string prefix =
      "run " + std::to_string(index) + " (seed " + std::to_string(seed) + "): ";
  try {
    std::rethrow_exception(ep);
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(prefix + e.what());
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

}  // namespace

EnsembleSummary run_ensemble(const Scenario& sc, const EnsembleSpec& spec,
                             std::vector<RunTrace>* traces) {
  if (spec.runs < 1) throw ValidationError("runs must be >= 1");
  const auto policy = make_policy(sc, spec.algorithm, spec.V, spec.gamma);

  EnsembleSummary out;
  out.scenario = sc.name;
  out.algorithm = std::string(to_string(spec.algorithm));
  out.V = spec.V;
  if (spec.algorithm == Algorithm::proposed) {
    out.gamma = static_cast<const ProposedController&>(*policy).params().gamma;
  }
  out.horizon = spec.horizon;
  out.runs = spec.runs;
  out.base_seed = spec.base_seed;
  out.rng = random::kAlgorithm;
  out.rng_version = random::kAlgorithmVersion;
  out.per_run.resize(spec.runs);

  std::vector<RunTrace> local;
  if (traces) local.resize(spec.runs);
  std::vector<std::exception_ptr> errors(spec.runs);

  auto one = [&](int i) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(i);
    try {
      IidEnvironment env(sc.network, sc.system, sc.rate_model, {spec.harvest, seed});
      RunTrace t = run(sc, *policy, env, {spec.horizon, traces != nullptr});
      out.per_run[i] = t.metrics;
      if (traces) local[i] = std::move(t);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, spec.runs);
  if (threads <= 1) {
    for (int i = 0; i < spec.runs; ++i) one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) {
      pool.emplace_back([&] {
        for (int i = next++; i < spec.runs; i = next++) one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < spec.runs; ++i) {
    if (errors[i]) rethrow_with_run(errors[i], i, spec.base_seed + static_cast<std::uint64_t>(i));
  }

  std::vector<double> u, su, eu, mb;
  for (const auto& m : out.per_run) {
    u.push_back(m.utility);
    su.push_back(m.mean_slot_utility);
    eu.push_back(m.energy_utilization);
    mb.push_back(m.max_backlog);
  }
  out.utility = summarize(u);
  out.mean_slot_utility = summarize(su);
  out.energy_utilization = summarize(eu);
  out.max_backlog = summarize(mb);
  if (traces) *traces = std::move(local);
  return out;
}

}  // namespace ehnet
