#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehnet/environment.hpp"
#include "ehnet/scenario.hpp"

namespace ehnet {

struct RunOptions {
  std::int64_t horizon = 1200;
  bool record_trace = true;
};

/// Everything that happened in one slot. `state` is the start-of-slot state.
struct SlotRecord {
  NetState state;
  EnvSample env;
  SlotDecision decision;
  std::vector<double> harvested;  // energy that entered each battery
  double utility = 0;             // sum of U(R(t))
  double admitted = 0;
  double delivered = 0;

  friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

struct RunMetrics {
  std::int64_t horizon = 0;
  std::vector<double> mean_rate;  // time-average admissions, node-major
  double utility = 0;             // sum of U(mean rate)
  double mean_slot_utility = 0;   // time average of sum U(R(t))
  double admitted = 0;
  double delivered = 0;
  double harvest_available = 0;   // xi * e over nodes that can transmit
  double harvest_stored = 0;
  double energy_utilization = 0;  // stored / available, 1 when nothing was offered
  double max_backlog = 0;
  double min_energy = 0;
  double max_energy = 0;
  std::int64_t invariant_checks = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct RunTrace {
  std::vector<SlotRecord> slots;  // empty unless RunOptions::record_trace
  NetState final_state;
  RunMetrics metrics;
};

/// The slot loop: sample, decide, check, update, record.
///
/// Checked every slot, throwing InvariantViolation with a dump of the
/// slot's state: 0 <= R <= R_max; per-node power within [0, P_max] and
/// within xi*eta*E; per-link flow rates within the link rate; batteries
/// within [0, E_max]; backlogs within the policy's queue bound; and
/// packet conservation.
RunTrace run(const Scenario& scenario, const Policy& policy, const Environment& env,
             const RunOptions& opts = {});

struct Stat {
  double mean = 0;
  double std = 0;  // sample standard deviation, 0 for one run

  friend bool operator==(const Stat&, const Stat&) = default;
};

Stat summarize(const std::vector<double>& xs);

struct EnsembleSpec {
  Algorithm algorithm = Algorithm::proposed;
  double V = 0;
  std::optional<double> gamma;  // proposed only; Gamma_min(V) when unset
  HarvestKind harvest = HarvestKind::two_point;
  std::int64_t horizon = 1200;
  int runs = 10;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0: hardware concurrency
};

struct EnsembleSummary {
  std::string scenario;
  std::string algorithm;
  double V = 0;
  std::optional<double> gamma;
  std::int64_t horizon = 0;
  int runs = 0;
  std::uint64_t base_seed = 0;
  std::string rng;
  int rng_version = 0;
  Stat utility;
  Stat mean_slot_utility;
  Stat energy_utilization;
  Stat max_backlog;
  std::vector<RunMetrics> per_run;

  friend bool operator==(const EnsembleSummary&, const EnsembleSummary&) = default;
};

/// Independent runs with seeds base_seed + i. Errors name the run index.
/// When `traces` is non-null it receives every run's trace, by index.
EnsembleSummary run_ensemble(const Scenario& scenario, const EnsembleSpec& spec,
                             std::vector<RunTrace>* traces = nullptr);

}  // namespace ehnet
