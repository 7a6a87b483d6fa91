#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ehnet/kernels.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/simulator.hpp"

namespace ehnet {

struct GapBound {
  double B1 = 0, B2 = 0, B3 = 0, B = 0;
  double V = 0, gamma = 0;
  double gap = 0;  // B / V
};

/// B = N^2 B1 + N (B2 + B3) and the optimality gap B/V. Rejects (V, gamma)
/// outside the admissible window.
GapBound gap_bound(const SystemParams& sys, int N, int d_max, double V, double gamma);

double gap_b1(const SystemParams& sys, int d_max);
double gap_b2(const SystemParams& sys, double gamma);
double gap_b3(const SystemParams& sys, double gamma);

/// Coefficients for kernels::gap_objective.
kernels::GapCoefficients gap_coefficients(const SystemParams& sys, int N, int d_max);

struct GapOptimum {
  double V = 0;
  double gamma = 0;
  double value = 0;  // G = B(gamma) / V
};

/// Minimum of B/V over 0 < V <= V_cap, Gamma_min(V) <= gamma <= Gamma_max(V).
///
/// For fixed V the objective is a convex piecewise quadratic in gamma, so
/// the inner minimum is exact: it sits at a window end, a kink of one of
/// the two max terms, or a stationary point of one of the four smooth
/// pieces. The outer problem in V is one-dimensional: a coarse scan, then
/// golden-section inside the best bracket.
///
/// Throws ValidationError if V_cap <= 0, V_cap > V_max, or the window is empty.
GapOptimum minimize_gap(const SystemParams& sys, int N, int d_max, double V_cap);

/// Brute force over a steps x steps grid on (0, V_cap] x [Gamma_min(V), Gamma_max(V)],
/// evaluated with the vector kernel.
GapOptimum grid_minimize_gap(const SystemParams& sys, int N, int d_max, double V_cap,
                             int steps = 400);

/// Utility of the time-average is at least the time-average utility.
bool jensen_holds(const RunMetrics& m, double tol = 1e-12);

enum class SweepParam { gamma, V, e_max };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

struct SweepPoint {
  double value = 0;
  std::string algorithm;
  bool ok = true;
  std::string message;  // why the point was skipped
  EnsembleSummary summary;
};

/// One ensemble per (value, algorithm). Points that fail validation are
/// flagged and the sweep carries on.
std::vector<SweepPoint> sweep(const Scenario& scenario, SweepParam param,
                              const std::vector<double>& values,
                              const std::vector<Algorithm>& algorithms, const EnsembleSpec& base);

/// The e_max sweep with all three algorithms.
std::vector<SweepPoint> compare_algorithms(const Scenario& scenario, double V, std::int64_t horizon,
                                           int runs, const std::vector<double>& e_max_values,
                                           std::uint64_t base_seed = 1, int threads = 0);

/// Rows of the comparison as "param_value,algorithm,mean_utility,std_utility,energy_utilization".
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace ehnet
