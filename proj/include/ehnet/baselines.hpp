#pragma once

#include "ehnet/controller.hpp"
#include "ehnet/scenario.hpp"

namespace ehnet {

/// ESA: the proposed rule evaluated as if the battery were perfect
/// (xi = eta = 1), with energy weight E_n - harvest_cutoff, and harvesting
/// refused above the cutoff.
struct EsaParams {
  double V = 0;
  double harvest_cutoff = 0;  // delta1 * g_max * V + P_max

  static EsaParams make(const SystemParams& sys, double V);
};

SlotDecision esa_step(const Scenario& scenario, const EsaParams& params, const NetState& state,
                      const EnvSample& env, const SolverOptions& opts = {});

/// Largest-backlog-first link activation with no shared endpoints.
SlotDecision greedy_step(const Scenario& scenario, const NetState& state, const EnvSample& env);

class EsaController final : public Policy {
 public:
  EsaController(const Scenario& scenario, EsaParams params, SolverOptions opts = {})
      : scenario_(scenario), params_(params), opts_(opts) {}

  std::string_view name() const override { return "esa"; }
  SlotDecision decide(const NetState& state, const EnvSample& env) const override {
    return esa_step(scenario_, params_, state, env, opts_);
  }
  const EsaParams& params() const { return params_; }

 private:
  Scenario scenario_;
  EsaParams params_;
  SolverOptions opts_;
};

class GreedyController final : public Policy {
 public:
  explicit GreedyController(const Scenario& scenario) : scenario_(scenario) {}

  std::string_view name() const override { return "greedy"; }
  SlotDecision decide(const NetState& state, const EnvSample& env) const override {
    return greedy_step(scenario_, state, env);
  }

 private:
  Scenario scenario_;
};

}  // namespace ehnet
