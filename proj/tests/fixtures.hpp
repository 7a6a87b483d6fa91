#pragma once

#include "ehnet/scenario.hpp"

namespace fixtures {

inline ehnet::SystemParams reference_system(double eta = 0.98, double xi = 1.0, double e_max = 5) {
  ehnet::SystemParams s;
  s.R_max = 3;
  s.P_max = 2;
  s.mu_max = 2;
  s.E_max = 160;
  s.xi = xi;
  s.eta = eta;
  s.e_max = e_max;
  s.g_max = 1;
  s.delta1 = 2;
  s.delta2 = 0;
  return s;
}

inline ehnet::NetworkSpec seven_node_network() {
  return ehnet::NetworkSpec(7, {{1, 5}, {2, 5}, {3, 6}, {4, 6}, {5, 7}, {6, 7}}, {7});
}

inline ehnet::Scenario seven_node(double eta = 0.98, double xi = 1.0, double e_max = 5) {
  ehnet::Scenario sc;
  sc.name = "seven_node";
  sc.network = seven_node_network();
  sc.system = reference_system(eta, xi, e_max);
  sc.rate_model.kind = ehnet::RateKind::linear_gain;
  sc.rate_model.channel_domain = {1, 2};
  for (int n = 1; n <= 4; ++n) sc.utility.terms.push_back({n, 0, ehnet::UtilityFunction::log1p()});
  ehnet::derive_constants(sc);
  return sc;
}

}  // namespace fixtures
