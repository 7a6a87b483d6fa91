#include "ehnet/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <cmath>
#include <deque>
#include <sstream>

#include "ehnet/errors.hpp"
#include "ehnet/kernels.hpp"

namespace ehnet {

// ---------------------------------------------------------------- NetworkSpec

NetworkSpec::NetworkSpec(int node_count, std::vector<Link> links, std::vector<NodeId> flows)
    : node_count_(node_count), links_(std::move(links)), flows_(std::move(flows)) {
  if (node_count_ < 1) throw ValidationError("network needs at least one node");
  auto in_range = [&](NodeId n) { return n >= 1 && n <= node_count_; };
  for (const Link& l : links_) {
    if (!in_range(l.from) || !in_range(l.to)) {
      throw ValidationError("link [" + std::to_string(l.from) + "," + std::to_string(l.to) +
                            "] names a node outside 1.." + std::to_string(node_count_));
    }
    if (l.from == l.to) throw ValidationError("self-link at node " + std::to_string(l.from));
  }
  std::sort(links_.begin(), links_.end(),
            [](const Link& a, const Link& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  if (std::adjacent_find(links_.begin(), links_.end()) != links_.end()) {
    throw ValidationError("duplicate link in network");
  }
  for (NodeId c : flows_) {
    if (!in_range(c)) throw ValidationError("flow destination " + std::to_string(c) + " is not a node");
  }
  if (std::set<NodeId>(flows_.begin(), flows_.end()).size() != flows_.size()) {
    throw ValidationError("duplicate flow destination");
  }

  out_.assign(node_count_, {});
  in_.assign(node_count_, {});
  for (std::size_t i = 0; i < links_.size(); ++i) {
    out_[links_[i].from - 1].push_back(i);
    in_[links_[i].to - 1].push_back(i);
  }
  // in-links arrive sorted by sender already since links_ is sorted by (from, to)
  for (int n = 0; n < node_count_; ++n) {
    d_max_ = std::max({d_max_, static_cast<int>(out_[n].size()), static_cast<int>(in_[n].size())});
  }
}

std::span<const std::size_t> NetworkSpec::out_links(NodeId node) const { return out_.at(node - 1); }
std::span<const std::size_t> NetworkSpec::in_links(NodeId node) const { return in_.at(node - 1); }

std::vector<NodeId> NetworkSpec::out_neighbors(NodeId node) const {
  std::vector<NodeId> r;
  for (std::size_t l : out_links(node)) r.push_back(links_[l].to);
  return r;
}

std::vector<NodeId> NetworkSpec::in_neighbors(NodeId node) const {
  std::vector<NodeId> r;
  for (std::size_t l : in_links(node)) r.push_back(links_[l].from);
  return r;
}

std::size_t NetworkSpec::flow_index(NodeId destination) const {
  auto it = std::find(flows_.begin(), flows_.end(), destination);
  if (it == flows_.end()) throw ValidationError("no flow with destination " + std::to_string(destination));
  return static_cast<std::size_t>(it - flows_.begin());
}

std::optional<std::size_t> NetworkSpec::link_index(NodeId from, NodeId to) const {
  Link key{from, to};
  auto it = std::lower_bound(links_.begin(), links_.end(), key, [](const Link& a, const Link& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  if (it == links_.end() || !(*it == key)) return std::nullopt;
  return static_cast<std::size_t>(it - links_.begin());
}

bool NetworkSpec::reaches(NodeId from, NodeId to) const {
  std::vector<bool> seen(node_count_, false);
  std::deque<NodeId> frontier{from};
  seen[from - 1] = true;
  while (!frontier.empty()) {
    NodeId n = frontier.front();
    frontier.pop_front();
    if (n == to) return true;
    for (NodeId m : out_neighbors(n)) {
      if (!seen[m - 1]) {
        seen[m - 1] = true;
        frontier.push_back(m);
      }
    }
  }
  return false;
}

// --------------------------------------------------------------- validation

namespace {

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

ValidationCheck leq(std::string name, double lhs, double rhs, std::string lhs_text,
                    std::string rhs_text) {
  ValidationCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.passed = lhs <= rhs;
  c.inequality = lhs_text + " = " + fmt_num(lhs) + (c.passed ? " <= " : " > ") + rhs_text + " = " +
                 fmt_num(rhs);
  return c;
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.inequality << '\n';
  }
  return os.str();
}

ValidationReport validate_system(const SystemParams& s) {
  const std::pair<const char*, double> fields[] = {
      {"R_max", s.R_max}, {"P_max", s.P_max}, {"mu_max", s.mu_max}, {"E_max", s.E_max},
      {"xi", s.xi},       {"eta", s.eta},     {"e_max", s.e_max},   {"g_max", s.g_max},
      {"delta1", s.delta1}, {"delta2", s.delta2}};
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v)) throw ValidationError(std::string("parameter ") + name + " is not finite");
  }

  ValidationReport r;
  for (const auto& [name, v] : fields) {
    const std::string n = name;
    if (n == "delta1" || n == "delta2") {
      ValidationCheck c = leq("nonnegative " + n, 0.0, v, "0", n);
      c.inequality = n + " = " + fmt_num(v) + (c.passed ? " >= 0" : " is negative");
      r.checks.push_back(c);
    } else {
      ValidationCheck c = leq("positive " + n, 0.0, v, "0", n);
      c.passed = v > 0;
      c.inequality = n + " = " + fmt_num(v) + (c.passed ? " > 0" : " is not > 0");
      r.checks.push_back(c);
    }
  }
  r.checks.push_back(leq("xi <= 1", s.xi, 1.0, "xi", "1"));
  r.checks.push_back(leq("eta <= 1", s.eta, 1.0, "eta", "1"));

  // A1: the largest energy arrival cannot outrun the largest departure.
  r.checks.push_back(leq("A1", s.xi * s.e_max, (1 - s.eta) * s.E_max + s.P_max / s.xi, "xi*e_max",
                         "(1-eta)*E_max + P_max/xi"));
  // A2: the battery spans one full charge plus one full discharge.
  r.checks.push_back(leq("A2", s.P_max / s.xi + s.xi * s.e_max, s.E_max, "P_max/xi + xi*e_max",
                         "E_max"));
  return r;
}

// ------------------------------------------------------------- param window

ParamWindow::ParamWindow(const SystemParams& sys) : sys_(sys) {
  const double slope = sys.delta1 + sys.delta2;
  const double denom = sys.xi * slope * sys.g_max;
  const double numer = sys.E_max - sys.xi * sys.e_max - sys.P_max / sys.xi;
  if (slope == 0 && sys.g_max == 0) {
    throw ValidationError("delta1 + delta2 and g_max are both zero; V_max is undefined");
  }
  v_max_ = denom == 0 ? kUnlimited : numer / denom;
}

double ParamWindow::gamma_min(double V) const {
  return sys_.P_max / (sys_.xi * sys_.eta) + (sys_.xi / sys_.eta) * sys_.delta1 * sys_.g_max * V;
}

double ParamWindow::gamma_max(double V) const {
  return (sys_.E_max - sys_.xi * sys_.e_max) / sys_.eta -
         (sys_.xi / sys_.eta) * sys_.delta2 * sys_.g_max * V;
}

bool ParamWindow::admits(double V, double gamma, double tol) const {
  if (!(V > 0) || V > v_max_ * (1 + tol)) return false;
  return gamma >= gamma_min(V) - tol * std::max(1.0, std::abs(gamma)) &&
         gamma <= gamma_max(V) + tol * std::max(1.0, std::abs(gamma));
}

ParamWindow param_window(const SystemParams& sys) { return ParamWindow(sys); }

double perturbation_theta(const SystemParams& sys, int d_max) {
  return sys.R_max + d_max * sys.mu_max;
}

AlgorithmParams AlgorithmParams::make(const SystemParams& sys, int d_max, double V,
                                      std::optional<double> gamma) {
  const ParamWindow w(sys);
  AlgorithmParams p;
  p.V = V;
  p.gamma = gamma.value_or(w.gamma_min(V));
  p.theta = perturbation_theta(sys, d_max);
  if (!(V > 0) || !(V < w.v_max())) {
    throw ValidationError("V = " + fmt_num(V) + " outside (0, V_max = " + fmt_num(w.v_max()) + ")");
  }
  if (!w.admits(V, p.gamma)) {
    throw ValidationError("Gamma = " + fmt_num(p.gamma) + " outside [Gamma_min = " +
                          fmt_num(w.gamma_min(V)) + ", Gamma_max = " + fmt_num(w.gamma_max(V)) +
                          "] at V = " + fmt_num(V));
  }
  return p;
}

// ------------------------------------------------------------------- state

NetState NetState::initial(const NetworkSpec& net) {
  NetState s;
  s.node_count = static_cast<std::size_t>(net.node_count());
  s.flow_count = net.flow_count();
  s.Q.assign(s.node_count * s.flow_count, 0.0);
  s.E.assign(s.node_count, 0.0);
  return s;
}

double NetState::node_backlog(NodeId n) const {
  double total = 0;
  for (std::size_t f = 0; f < flow_count; ++f) total += q(n, f);
  return total;
}

ChannelState ChannelState::uniform(std::size_t node_count, double value) {
  ChannelState c;
  c.node_count = node_count;
  c.gains.assign(node_count * node_count, value);
  for (std::size_t i = 0; i < node_count; ++i) c.gains[i * node_count + i] = 0.0;
  return c;
}

SlotDecision SlotDecision::zero(const NetworkSpec& net) {
  const std::size_t N = static_cast<std::size_t>(net.node_count());
  SlotDecision d;
  d.R.assign(N * net.flow_count(), 0.0);
  d.P.assign(net.link_count(), 0.0);
  d.mu_c.assign(net.link_count() * net.flow_count(), 0.0);
  d.mu_link.assign(net.link_count(), 0.0);
  d.harvest_limit.assign(N, kUnlimited);
  return d;
}

double SlotDecision::node_power(const NetworkSpec& net, NodeId n) const {
  double total = 0;
  for (std::size_t l : net.out_links(n)) total += P[l];
  return total;
}

// ------------------------------------------------------------- queue update

QueueUpdate update_queues(const NetState& state, const SlotDecision& dec, const EnvSample& env,
                          const SystemParams& sys, const NetworkSpec& net) {
  const std::size_t N = state.node_count;
  const std::size_t F = state.flow_count;

  QueueUpdate u;
  u.next = state;
  u.next.slot = state.slot + 1;
  u.delivered.assign(F, 0.0);
  u.transferred.assign(net.link_count() * F, 0.0);

  // Data: departures are limited by the start-of-slot backlog only.
  std::vector<double> inflow(N * F, 0.0);
  for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
    for (std::size_t f = 0; f < F; ++f) {
      double remaining = state.q(n, f);
      for (std::size_t l : net.out_links(n)) {
        const double rate = dec.mu_c[l * F + f];
        if (rate <= 0) continue;
        const double moved = std::min(remaining, rate);
        remaining -= moved;
        u.transferred[l * F + f] = moved;
        const NodeId m = net.links()[l].to;
        if (m == net.flows()[f]) {
          u.delivered[f] += moved;
        } else {
          inflow[(m - 1) * F + f] += moved;
        }
      }
      u.next.q(n, f) = remaining;
    }
  }
  for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
    for (std::size_t f = 0; f < F; ++f) {
      double& q = u.next.q(n, f);
      if (n == net.flows()[f]) {
        u.delivered[f] += dec.R[(n - 1) * F + f];
        q = 0.0;
        continue;
      }
      q += inflow[(n - 1) * F + f] + dec.R[(n - 1) * F + f];
      if (q < 0) {
        if (q < -kClampTolerance) {
          throw InvariantViolation("negative backlog at node " + std::to_string(n) + " flow " +
                                   std::to_string(net.flows()[f]) + ": " + fmt_num(q));
        }
        q = 0.0;
      }
    }
  }

  // Energy.
  std::vector<double> spent(N, 0.0);
  u.harvested.assign(N, 0.0);
  for (NodeId n = 1; n <= static_cast<NodeId>(N); ++n) {
    const std::size_t i = n - 1;
    spent[i] = dec.node_power(net, n);
    double h = std::min(sys.xi * env.harvest[i], dec.harvest_limit[i]);
    if (net.is_terminal(n)) {
      const double room = sys.E_max - (sys.eta * state.E[i] - spent[i] / sys.xi);
      h = std::min(h, std::max(room, 0.0));
    }
    u.harvested[i] = std::max(h, 0.0);
  }
  kernels::energy_update(state.E, spent, u.harvested, sys.eta, sys.xi, u.next.E);
  for (std::size_t i = 0; i < N; ++i) {
    double& e = u.next.E[i];
    if (e < 0 || e > sys.E_max) {
      const double excess = e < 0 ? -e : e - sys.E_max;
      if (excess > kClampTolerance) {
        throw InvariantViolation("energy queue of node " + std::to_string(i + 1) + " left [0, " +
                                 fmt_num(sys.E_max) + "]: " + fmt_num(e) + " (E=" +
                                 fmt_num(state.E[i]) + ", spent=" + fmt_num(spent[i]) +
                                 ", harvested=" + fmt_num(u.harvested[i]) + ")");
      }
      e = std::clamp(e, 0.0, sys.E_max);
    }
  }
  return u;
}

}  // namespace ehnet
