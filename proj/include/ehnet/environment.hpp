#pragma once

#include <cstdint>
#include <string_view>

#include "ehnet/model.hpp"
#include "ehnet/rate_power.hpp"

namespace ehnet {

enum class HarvestKind { two_point, uniform };

std::string_view to_string(HarvestKind k);
HarvestKind parse_harvest_kind(std::string_view name);

struct EnvConfig {
  HarvestKind harvest = HarvestKind::two_point;  // {0, e_max} w.p. 1/2, or U[0, e_max]
  std::uint64_t seed = 1;
};

/// Source of e(t) and S(t). May look at the current state (adversarial
/// generators in tests do); the i.i.d. process ignores it.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvSample sample(std::int64_t slot, const NetState& state) const = 0;
};

/// Harvest i.i.d. per node and slot; every ordered channel gain i.i.d.
/// uniform over the model's domain. Draw (seed, stream, entity, slot) is
/// a pure hash, so the sequence does not depend on evaluation order.
class IidEnvironment final : public Environment {
 public:
  IidEnvironment(const NetworkSpec& net, const SystemParams& sys, const RatePowerModel& model,
                 EnvConfig cfg);

  EnvSample sample(std::int64_t slot, const NetState& state) const override;

 private:
  std::size_t node_count_;
  double e_max_;
  std::vector<double> domain_;
  EnvConfig cfg_;
};

}  // namespace ehnet
