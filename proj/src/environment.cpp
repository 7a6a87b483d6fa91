#include "ehnet/environment.hpp"

#include "ehnet/errors.hpp"
#include "ehnet/random.hpp"

namespace ehnet {

namespace {
constexpr std::uint64_t kHarvestStream = 1;
constexpr std::uint64_t kChannelStream = 2;
}  // namespace

std::string_view to_string(HarvestKind k) {
  return k == HarvestKind::two_point ? "two-point" : "uniform";
}

HarvestKind parse_harvest_kind(std::string_view name) {
  if (name == "two-point") return HarvestKind::two_point;
  if (name == "uniform") return HarvestKind::uniform;
  throw ValidationError("unknown energy kind '" + std::string(name) +
                        "' (expected two-point or uniform)");
}

IidEnvironment::IidEnvironment(const NetworkSpec& net, const SystemParams& sys,
                               const RatePowerModel& model, EnvConfig cfg)
    : node_count_(static_cast<std::size_t>(net.node_count())),
      e_max_(sys.e_max),
      domain_(model.channel_domain),
      cfg_(cfg) {
  if (domain_.empty()) throw ValidationError("channel domain is empty");
  if (!(e_max_ >= 0)) throw ValidationError("e_max must be >= 0");
}

EnvSample IidEnvironment::sample(std::int64_t slot, const NetState&) const {
  const auto t = static_cast<std::uint64_t>(slot);
  const std::size_t N = node_count_;
  EnvSample s;
  s.harvest.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t bits = random::counter_hash(cfg_.seed, kHarvestStream, i, t);
    if (cfg_.harvest == HarvestKind::two_point) {
      s.harvest[i] = (bits >> 63) ? e_max_ : 0.0;
    } else {
      s.harvest[i] = e_max_ * random::to_unit(bits);
    }
  }
  s.channel = ChannelState::uniform(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      const std::uint64_t bits = random::counter_hash(cfg_.seed, kChannelStream, i * N + j, t);
      s.channel.gains[i * N + j] = domain_[bits % domain_.size()];
    }
  }
  return s;
}

}  // namespace ehnet
