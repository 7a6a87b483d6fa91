#pragma once

#include <span>
#include <vector>

#include "ehnet/model.hpp"
#include "ehnet/rate_power.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/utility.hpp"

namespace ehnet {

/// argmax over [0, R_max] of V*U(R) - Q*R. Closed form for log1p,
/// golden-section search (1e-9) otherwise. Throws SolverError if the
/// objective is seen to be non-unimodal.
double admit_one(const UtilityFunction& U, double V, double Q, double R_max);

/// Admissions for every utility term; zero elsewhere. Node-major layout.
std::vector<double> admit_data(const NetState& state, const UtilitySpec& utility, double V,
                               double R_max);

/// Perturbed backpressure per (link, flow) and the MaxWeight choice per link.
struct LinkWeights {
  std::size_t flow_count = 0;
  std::vector<double> W_c;               // [l * F + f] = [Q_n^f - Q_m^f - theta]^+
  std::vector<double> W;                 // max_f W_c
  std::vector<std::size_t> best_flow;    // smallest flow index attaining W
};

LinkWeights compute_weights(const NetState& state, const NetworkSpec& net, double theta);

struct SolverOptions {
  int restarts = 8;
  int max_sweeps = 500;
  double tolerance = 1e-8;
};

struct PowerAllocation {
  std::vector<double> P;
  std::vector<double> mu;
  double objective = 0;
};

/// Value of the slot objective
///   sum_l W_l mu_l(S, P) + sum_n (eta/xi)(E_n - Gamma) sum_{l out of n} P_l.
double power_objective(const LinkWeights& w, std::span<const double> E, const RatePowerModel& model,
                       const ChannelState& S, const AlgorithmParams& params,
                       const SystemParams& sys, const NetworkSpec& net, std::span<const double> P);

/// Maximizes power_objective subject only to the per-node budget
/// sum_m P_[n,m] <= P_max. Energy availability is not a constraint here.
///
/// linear-gain: per node, all of P_max on the out-link with the largest
/// positive W*S + (eta/xi)(E - Gamma), smallest receiver on ties.
/// orthogonal-log: per-node water-filling.
/// interference-log: multi-start coordinate ascent; throws SolverError
/// when a start fails to converge within the sweep cap.
PowerAllocation allocate_power(const LinkWeights& w, std::span<const double> E,
                               const RatePowerModel& model, const ChannelState& S,
                               const AlgorithmParams& params, const SystemParams& sys,
                               const NetworkSpec& net, const SolverOptions& opts = {});

/// MaxWeight: each link's full rate goes to its best flow when that
/// flow's weight is positive. Result indexed [l * F + f].
std::vector<double> schedule(const LinkWeights& w, std::span<const double> mu);

/// The proposed controller: admission, weights, power, scheduling.
class ProposedController final : public Policy {
 public:
  ProposedController(const Scenario& scenario, AlgorithmParams params, SolverOptions opts = {});

  std::string_view name() const override { return "proposed"; }
  SlotDecision decide(const NetState& state, const EnvSample& env) const override;
  std::optional<double> queue_bound() const override;
  const AlgorithmParams& params() const { return params_; }

 private:
  Scenario scenario_;
  AlgorithmParams params_;
  SolverOptions opts_;
};

/// One slot of the proposed controller. Throws InvariantViolation if a
/// node with xi*eta*E_n < P_max was given power.
SlotDecision step(const Scenario& scenario, const AlgorithmParams& params, const NetState& state,
                  const EnvSample& env, const SolverOptions& opts = {});

}  // namespace ehnet
