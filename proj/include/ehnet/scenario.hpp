#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ehnet/model.hpp"
#include "ehnet/rate_power.hpp"
#include "ehnet/utility.hpp"

namespace ehnet {

/// Everything static about one network instance.
struct Scenario {
  std::string name;
  NetworkSpec network;
  SystemParams system;
  RatePowerModel rate_model;
  UtilitySpec utility;
};

/// Fills delta1/delta2 from the rate model and g_max from the utilities.
void derive_constants(Scenario& scenario);

/// A per-slot control rule. Implementations hold no mutable state, so a
/// single instance may serve concurrent runs.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual SlotDecision decide(const NetState& state, const EnvSample& env) const = 0;
  /// Sample-path upper bound on every data backlog, when the rule has one.
  virtual std::optional<double> queue_bound() const { return std::nullopt; }
};

enum class Algorithm { proposed, esa, greedy };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// gamma is only used by the proposed controller (defaults to Gamma_min).
std::unique_ptr<Policy> make_policy(const Scenario& scenario, Algorithm algorithm, double V,
                                    std::optional<double> gamma = std::nullopt);

}  // namespace ehnet
