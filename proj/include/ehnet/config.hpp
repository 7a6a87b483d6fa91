#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehnet/environment.hpp"
#include "ehnet/scenario.hpp"

namespace ehnet {

struct AlgorithmDefaults {
  Algorithm algorithm = Algorithm::proposed;
  double V = 30;
  std::optional<double> gamma;
  std::int64_t horizon = 1200;
  int runs = 10;
};

struct Config {
  Scenario scenario;  // delta1, delta2, g_max already derived
  EnvConfig environment;
  AlgorithmDefaults defaults;
  std::vector<std::string> warnings;
};

/// YAML layout:
///
///   name: seven_node
///   network:     { nodes: 7, links: [[1,5], ...], flows: [7] }
///   system:      { R_max, P_max, mu_max, E_max, xi, eta, e_max }
///   rate_power:  { kind: linear-gain, channel_states: [1, 2], noise_variance: 1 }
///   utility:     { form: log1p, weight: 1, exponent: 0.5, terms: [[node, destination], ...] }
///   environment: { energy: two-point, seed: 1 }
///   algorithm:   { name: proposed, V: 30, Gamma: 80, horizon: 1200, runs: 10 }
///
/// environment and algorithm are optional, as are weight/exponent and
/// Gamma. Errors are ValidationError with "source:line:column: field: ...".
Config parse_config(const std::string& text, const std::string& source = "<string>");
Config load_config(const std::string& path);

}  // namespace ehnet
