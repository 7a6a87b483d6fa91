#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ehnet {

// Nodes are identified 1..N throughout the public surface.
using NodeId = int;

struct Link {
  NodeId from = 0;
  NodeId to = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Static topology: directed links and the set of flows (commodities),
/// each flow named by its destination node.
///
/// Links are stored sorted by (from, to), so the out-links of a node are
/// already in ascending receiver order.
class NetworkSpec {
 public:
  NetworkSpec() = default;
  /// Throws ValidationError on self-links, duplicate links, ids outside
  /// 1..node_count or flows that do not name a node.
  NetworkSpec(int node_count, std::vector<Link> links, std::vector<NodeId> flows);

  int node_count() const { return node_count_; }
  std::size_t link_count() const { return links_.size(); }
  std::size_t flow_count() const { return flows_.size(); }
  std::span<const Link> links() const { return links_; }
  std::span<const NodeId> flows() const { return flows_; }

  /// Link indices leaving / entering `node`, ascending by the other endpoint.
  std::span<const std::size_t> out_links(NodeId node) const;
  std::span<const std::size_t> in_links(NodeId node) const;
  std::vector<NodeId> out_neighbors(NodeId node) const;
  std::vector<NodeId> in_neighbors(NodeId node) const;

  /// Nodes with no outgoing link can never spend energy.
  bool is_terminal(NodeId node) const { return out_links(node).empty(); }

  int d_max() const { return d_max_; }
  std::size_t flow_index(NodeId destination) const;
  std::optional<std::size_t> link_index(NodeId from, NodeId to) const;
  bool reaches(NodeId from, NodeId to) const;

 private:
  int node_count_ = 0;
  std::vector<Link> links_;
  std::vector<NodeId> flows_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  int d_max_ = 0;
};

/// Physical constants and bounds.
struct SystemParams {
  double R_max = 0;   // packets/slot
  double P_max = 0;   // power units
  double mu_max = 0;  // packets/slot
  double E_max = 0;   // battery capacity
  double xi = 1;      // (dis-)charging efficiency, (0, 1]
  double eta = 1;     // storage efficiency, (0, 1]
  double e_max = 0;   // energy units/slot
  double g_max = 0;   // utility-derivative bound
  double delta1 = 0;
  double delta2 = 0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string inequality;  // human-readable "lhs op rhs" with both sides evaluated
  double lhs = 0;
  double rhs = 0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck* find(std::string_view name) const;
  std::string to_string() const;
};

/// Positivity plus the two stability conditions on the battery and
/// harvest bounds. Report-style; throws only on non-finite inputs.
ValidationReport validate_system(const SystemParams& sys);

/// The admissible (V, Gamma) region for the proposed controller.
class ParamWindow {
 public:
  explicit ParamWindow(const SystemParams& sys);

  double v_max() const { return v_max_; }
  double gamma_min(double V) const;
  double gamma_max(double V) const;
  bool admits(double V, double gamma, double tol = 1e-9) const;

 private:
  SystemParams sys_;
  double v_max_;
};

ParamWindow param_window(const SystemParams& sys);

struct AlgorithmParams {
  double V = 0;
  double gamma = 0;
  double theta = 0;

  /// Validates (V, gamma) against the window; gamma defaults to Gamma_min(V).
  /// Theta is fixed to R_max + d_max * mu_max.
  static AlgorithmParams make(const SystemParams& sys, int d_max, double V,
                              std::optional<double> gamma = std::nullopt);
};

double perturbation_theta(const SystemParams& sys, int d_max);

/// Per-slot queue state. Backlogs are stored node-major: Q[(n-1)*F + f].
struct NetState {
  std::size_t node_count = 0;
  std::size_t flow_count = 0;
  std::vector<double> Q;
  std::vector<double> E;
  std::int64_t slot = 0;

  static NetState initial(const NetworkSpec& net);

  double q(NodeId n, std::size_t f) const { return Q[(n - 1) * flow_count + f]; }
  double& q(NodeId n, std::size_t f) { return Q[(n - 1) * flow_count + f]; }
  double e(NodeId n) const { return E[n - 1]; }
  double node_backlog(NodeId n) const;

  friend bool operator==(const NetState&, const NetState&) = default;
};

/// Dense N x N channel gains; gain(n, m) is |h_[n,m]|^2 for log models and
/// the state S_[n,m] for the linear model. The diagonal is zero.
struct ChannelState {
  std::size_t node_count = 0;
  std::vector<double> gains;

  static ChannelState uniform(std::size_t node_count, double value);
  double gain(NodeId from, NodeId to) const { return gains[(from - 1) * node_count + (to - 1)]; }
  double& gain(NodeId from, NodeId to) { return gains[(from - 1) * node_count + (to - 1)]; }

  friend bool operator==(const ChannelState&, const ChannelState&) = default;
};

struct EnvSample {
  std::vector<double> harvest;  // e_n(t), per node
  ChannelState channel;

  friend bool operator==(const EnvSample&, const EnvSample&) = default;
};

/// One slot's control output.
struct SlotDecision {
  std::vector<double> R;      // admissions, node-major like NetState::Q
  std::vector<double> P;      // per link
  std::vector<double> mu_c;   // per (link, flow): mu_c[l*F + f]
  std::vector<double> mu_link;
  /// Energy the battery accepts this slot (after the xi factor); +inf
  /// means everything offered is stored.
  std::vector<double> harvest_limit;

  static SlotDecision zero(const NetworkSpec& net);
  double node_power(const NetworkSpec& net, NodeId n) const;

  friend bool operator==(const SlotDecision&, const SlotDecision&) = default;
};

/// Result of applying one slot's decision to the queues.
struct QueueUpdate {
  NetState next;
  std::vector<double> harvested;    // energy that actually entered each battery
  std::vector<double> delivered;    // per flow, packets absorbed at the destination
  std::vector<double> transferred;  // per (link, flow), packets actually moved
};

/// Data and energy queue dynamics.
///
/// Each sender serves its links in ascending receiver order; the packets
/// moved on a link for its scheduled flow are min(remaining backlog,
/// allocated rate), the rest of the rate is idle-filled. Energy is charged
/// for the full allocated power. Arrivals for flow c at node c are
/// delivered and never enqueued. A terminal node spills harvest that
/// would overflow its battery.
///
/// Throws InvariantViolation if a battery leaves [0, E_max] by more than
/// 1e-9 or a backlog goes negative; smaller excursions are clamped.
QueueUpdate update_queues(const NetState& state, const SlotDecision& dec, const EnvSample& env,
                          const SystemParams& sys, const NetworkSpec& net);

inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

}  // namespace ehnet
