#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehnet/analysis.hpp"
#include "ehnet/simulator.hpp"

namespace ehnet::io {

/// Shortest decimal text that reads back to the same double.
std::string number(double x);

inline constexpr const char* kTraceHeader =
    "slot,node,flow,Q,E,R,P_total,mu_total,e_harvested,S_summary";

/// One row per (slot, node, flow) with the start-of-slot backlog and the
/// admission, then one energy row per (slot, node) with an empty flow
/// field: battery, power, rate, harvest and the out-link channel states
/// joined by '|'.
void write_trace_csv(std::ostream& out, const Scenario& scenario, const RunTrace& trace);

nlohmann::json to_json(const RunMetrics& m);
nlohmann::json to_json(const EnsembleSummary& s);
RunMetrics metrics_from_json(const nlohmann::json& j);
EnsembleSummary summary_from_json(const nlohmann::json& j);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Self-contained SVG line chart.
std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);

/// Groups ok sweep points by algorithm into chart series of mean utility.
std::vector<Series> utility_series(const std::vector<SweepPoint>& points);

}  // namespace ehnet::io
