#include "ehnet/rate_power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehnet/errors.hpp"
#include "ehnet/random.hpp"

namespace ehnet {

std::string_view to_string(RateKind kind) {
  switch (kind) {
    case RateKind::interference_log: return "interference-log";
    case RateKind::orthogonal_log: return "orthogonal-log";
    case RateKind::linear_gain: return "linear-gain";
  }
  return "?";
}

RateKind parse_rate_kind(std::string_view name) {
  for (RateKind k : {RateKind::interference_log, RateKind::orthogonal_log, RateKind::linear_gain}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown rate-power kind '" + std::string(name) +
                        "' (expected interference-log, orthogonal-log or linear-gain)");
}

namespace {

double domain_max(const RatePowerModel& model) {
  if (model.channel_domain.empty()) throw ValidationError("channel domain is empty");
  double best = 0;
  for (double g : model.channel_domain) {
    if (!std::isfinite(g)) {
      throw ValidationError("unbounded channel gain in domain: mu_max < inf does not hold");
    }
    if (g < 0) throw ValidationError("negative channel gain in domain");
    best = std::max(best, g);
  }
  return best;
}

bool is_log(RateKind k) { return k != RateKind::linear_gain; }

void require_noise(const RatePowerModel& model) {
  if (is_log(model.kind) && !(model.noise_variance > 0)) {
    throw ValidationError("noise variance must be > 0 for " + std::string(to_string(model.kind)));
  }
}

}  // namespace

double RatePowerModel::peak_rate(double P_max) const {
  const double g = domain_max(*this);
  if (kind == RateKind::linear_gain) return g * P_max;
  require_noise(*this);
  return std::log1p(g * P_max / noise_variance);
}

std::vector<double> rate(const RatePowerModel& model, const NetworkSpec& net,
                         const ChannelState& S, std::span<const double> P) {
  require_noise(model);
  const auto links = net.links();
  if (P.size() != links.size()) throw std::invalid_argument("power vector length != link count");
  for (double p : P) {
    if (p < 0) throw ValidationError("negative power in allocation");
  }

  std::vector<double> mu(links.size(), 0.0);
  switch (model.kind) {
    case RateKind::linear_gain:
      for (std::size_t l = 0; l < links.size(); ++l) mu[l] = S.gain(links[l].from, links[l].to) * P[l];
      break;
    case RateKind::orthogonal_log:
      for (std::size_t l = 0; l < links.size(); ++l) {
        mu[l] = std::log1p(S.gain(links[l].from, links[l].to) * P[l] / model.noise_variance);
      }
      break;
    case RateKind::interference_log:
      for (std::size_t l = 0; l < links.size(); ++l) {
        if (P[l] == 0) continue;
        const NodeId m = links[l].to;
        double interference = 0;
        for (std::size_t k = 0; k < links.size(); ++k) {
          if (k == l || P[k] == 0) continue;
          const NodeId sender = links[k].from;
          if (sender == m) continue;  // no self-interference at the receiver
          interference += S.gain(sender, m) * P[k];
        }
        const double signal = S.gain(links[l].from, m) * P[l];
        mu[l] = std::log1p(signal / (interference + model.noise_variance));
      }
      break;
  }
  return mu;
}

Sensitivity sensitivity_constants(const RatePowerModel& model, const NetworkSpec& net) {
  const double g = domain_max(model);
  Sensitivity s;
  switch (model.kind) {
    case RateKind::linear_gain:
      s.delta1 = g;
      break;
    case RateKind::orthogonal_log:
      require_noise(model);
      s.delta1 = g / model.noise_variance;
      break;
    case RateKind::interference_log: {
      require_noise(model);
      s.delta1 = g / model.noise_variance;
      // Raising node n's power lifts the interference seen by every receiver
      // m' of another sender n' by |h_[n,m']|^2 * dP; |d mu / d I| <= 1/sigma^2.
      double worst = 0;
      for (NodeId n = 1; n <= net.node_count(); ++n) {
        if (net.is_terminal(n)) continue;
        double sum = 0;
        for (const Link& l : net.links()) {
          if (l.from == n || l.to == n) continue;
          sum += g;
        }
        worst = std::max(worst, sum);
      }
      s.delta2 = worst / model.noise_variance;
      break;
    }
  }
  return s;
}

// ----------------------------------------------------------- property check

namespace {

ChannelState sample_channel(const RatePowerModel& model, std::size_t N, random::CounterRng& rng) {
  ChannelState c = ChannelState::uniform(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i != j) c.gains[i * N + j] = model.channel_domain[rng.below(model.channel_domain.size())];
    }
  }
  return c;
}

// Random feasible allocation; sometimes tiny so the small-power slope regime
// of the log models is exercised.
std::vector<double> sample_power(const NetworkSpec& net, double P_max, random::CounterRng& rng) {
  std::vector<double> P(net.link_count(), 0.0);
  const double scale = rng.uniform() < 0.25 ? 1e-3 : 1.0;
  for (NodeId n = 1; n <= net.node_count(); ++n) {
    auto outs = net.out_links(n);
    if (outs.empty() || rng.uniform() < 0.15) continue;
    double budget = scale * P_max * rng.uniform();
    std::vector<double> w(outs.size());
    double total = 0;
    for (double& x : w) {
      x = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
      total += x;
    }
    if (total == 0) continue;
    for (std::size_t i = 0; i < outs.size(); ++i) P[outs[i]] = budget * w[i] / total;
  }
  return P;
}

std::string describe_link(const NetworkSpec& net, std::size_t l) {
  const Link& k = net.links()[l];
  return "[" + std::to_string(k.from) + "," + std::to_string(k.to) + "]";
}

}  // namespace

PropertyReport check_properties(const RatePowerModel& model, const NetworkSpec& net,
                                Sensitivity declared, double P_max, std::size_t trials,
                                std::uint64_t seed) {
  PropertyReport report;
  report.trials = trials;
  random::CounterRng rng(seed, 0x70726f70ULL);
  const std::size_t N = static_cast<std::size_t>(net.node_count());
  const std::size_t L = net.link_count();
  if (L == 0) return report;

  auto tol = [](double x) { return 1e-10 * (1.0 + std::abs(x)); };
  auto record = [&](std::string prop, std::string detail, double violation) {
    if (report.counterexamples.size() < 32) {
      report.counterexamples.push_back({std::move(prop), std::move(detail), violation});
    }
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const ChannelState S = sample_channel(model, N, rng);
    std::vector<double> P = sample_power(net, P_max, rng);
    const std::vector<double> mu = rate(model, net, S, P);

    // zero a single component: no other rate may drop; own drop <= delta1 * P
    std::vector<std::size_t> active;
    for (std::size_t l = 0; l < L; ++l) {
      if (P[l] > 0) active.push_back(l);
    }
    if (!active.empty()) {
      const std::size_t k = active[rng.below(active.size())];
      std::vector<double> Pz = P;
      Pz[k] = 0;
      const std::vector<double> muz = rate(model, net, S, Pz);
      for (std::size_t l = 0; l < L; ++l) {
        if (l == k) continue;
        if (mu[l] > muz[l] + tol(mu[l])) {
          record("isolation", "zeroing " + describe_link(net, k) + " lowered the rate of " + describe_link(net, l),
                 mu[l] - muz[l]);
        }
      }
      const double drop = mu[k] - muz[k];
      report.tightest_delta1 = std::max(report.tightest_delta1, drop / P[k]);
      if (drop < -tol(mu[k])) {
        record("delta1", "rate of " + describe_link(net, k) + " rose when its power was zeroed", -drop);
      } else if (drop > declared.delta1 * P[k] + tol(drop)) {
        std::ostringstream os;
        os << "link " << describe_link(net, k) << " at P=" << P[k] << ": rate drop " << drop
           << " > delta1*P = " << declared.delta1 * P[k];
        record("delta1", os.str(), drop - declared.delta1 * P[k]);
      }
    }

    // spread extra power evenly over one node's out-links.
    std::vector<NodeId> senders;
    for (NodeId n = 1; n <= net.node_count(); ++n) {
      if (!net.is_terminal(n)) senders.push_back(n);
    }
    const NodeId n = senders[rng.below(senders.size())];
    auto outs = net.out_links(n);
    double used = 0;
    for (std::size_t l : outs) used += P[l];
    const double headroom = P_max - used;
    if (headroom <= 0) continue;
    const double dP = headroom * (0.05 + 0.95 * rng.uniform());
    std::vector<double> Pu = P;
    for (std::size_t l : outs) Pu[l] += dP / static_cast<double>(outs.size());
    const std::vector<double> muu = rate(model, net, S, Pu);
    for (std::size_t l : outs) {
      if (muu[l] < mu[l] - tol(mu[l])) {
        record("spread", "spreading power at node " + std::to_string(n) + " lowered " + describe_link(net, l),
               mu[l] - muu[l]);
      }
    }
    double others_loss = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (net.links()[l].from != n) others_loss += mu[l] - muu[l];
    }
    report.tightest_delta2 = std::max(report.tightest_delta2, others_loss / dP);
    if (others_loss < -tol(others_loss)) {
      record("delta2", "other nodes gained rate when node " + std::to_string(n) + " raised power",
             -others_loss);
    } else if (others_loss > declared.delta2 * dP + tol(others_loss)) {
      std::ostringstream os;
      os << "node " << n << " dP=" << dP << ": others lost " << others_loss
         << " > delta2*dP = " << declared.delta2 * dP;
      record("delta2", os.str(), others_loss - declared.delta2 * dP);
    }
  }
  return report;
}

}  // namespace ehnet
