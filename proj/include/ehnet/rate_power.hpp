#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehnet/model.hpp"

namespace ehnet {

enum class RateKind { interference_log, orthogonal_log, linear_gain };

std::string_view to_string(RateKind kind);
RateKind parse_rate_kind(std::string_view name);

/// A rate-power function mu_[n,m](S, P) together with the finite set of
/// values each channel gain can take.
struct RatePowerModel {
  RateKind kind = RateKind::linear_gain;
  double noise_variance = 1.0;           // sigma^2, log kinds only
  std::vector<double> channel_domain;    // finite, nonnegative

  /// Largest single-link rate reachable with one node's full budget.
  double peak_rate(double P_max) const;
};

/// Per-link rates for power vector P (indexed like NetworkSpec::links()).
/// Natural logarithm for the log kinds. Throws ValidationError on negative
/// power or a nonpositive noise variance.
std::vector<double> rate(const RatePowerModel& model, const NetworkSpec& net,
                         const ChannelState& S, std::span<const double> P);

struct Sensitivity {
  double delta1 = 0;
  double delta2 = 0;
};

/// Sensitivity constants (delta1, delta2) of the model over its channel domain.
Sensitivity sensitivity_constants(const RatePowerModel& model, const NetworkSpec& net);

struct PropertyCounterexample {
  std::string property;  // "isolation", "delta1", "spread", "delta2"
  std::string detail;
  double violation = 0;
};

struct PropertyReport {
  std::size_t trials = 0;
  std::vector<PropertyCounterexample> counterexamples;
  double tightest_delta1 = 0;  // largest observed ratio for delta1
  double tightest_delta2 = 0;  // largest observed ratio for delta2

  bool ok() const { return counterexamples.empty(); }
};

/// Randomized check of the monotone-interference, slope and spreading
/// bounds against the declared constants.
PropertyReport check_properties(const RatePowerModel& model, const NetworkSpec& net,
                                Sensitivity declared, double P_max, std::size_t trials,
                                std::uint64_t seed = 1);

}  // namespace ehnet
