#include "ehnet/scenario.hpp"

#include "ehnet/baselines.hpp"
#include "ehnet/controller.hpp"
#include "ehnet/errors.hpp"

namespace ehnet {

void derive_constants(Scenario& sc) {
  const Sensitivity s = sensitivity_constants(sc.rate_model, sc.network);
  sc.system.delta1 = s.delta1;
  sc.system.delta2 = s.delta2;
  sc.system.g_max = sc.utility.g_max();
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::proposed: return "proposed";
    case Algorithm::esa: return "esa";
    case Algorithm::greedy: return "greedy";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::proposed, Algorithm::esa, Algorithm::greedy}) {
    if (name == to_string(a)) return a;
  }
  throw ValidationError("unknown algorithm '" + std::string(name) +
                        "' (expected proposed, esa or greedy)");
}

std::unique_ptr<Policy> make_policy(const Scenario& sc, Algorithm algorithm, double V,
                                    std::optional<double> gamma) {
  switch (algorithm) {
    case Algorithm::proposed:
      return std::make_unique<ProposedController>(
          sc, AlgorithmParams::make(sc.system, sc.network.d_max(), V, gamma));
    case Algorithm::esa:
      return std::make_unique<EsaController>(sc, EsaParams::make(sc.system, V));
    case Algorithm::greedy:
      return std::make_unique<GreedyController>(sc);
  }
  throw ValidationError("unknown algorithm");
}

}  // namespace ehnet
