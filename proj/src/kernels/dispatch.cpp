#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ehnet/kernels.hpp"

namespace ehnet::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(EHNET_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(EHNET_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("EHNET_KERNELS")) {
    const std::string name = forced;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return isa;
    }
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(EHNET_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table;
#endif
#if defined(EHNET_HAVE_NEON)
    case Isa::neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

const KernelTable& table() {
  static const KernelTable& active = table(active_isa());
  return active;
}

void energy_update(std::span<const double> E, std::span<const double> spent,
                   std::span<const double> harvest, double eta, double xi, std::span<double> out) {
  require_same(E.size(), spent.size());
  require_same(E.size(), harvest.size());
  require_same(E.size(), out.size());
  table().energy_update(E.data(), spent.data(), harvest.data(), eta, xi, out.data(), E.size());
}

void perturbed_backpressure(std::span<const double> from, std::span<const double> to, double theta,
                            std::span<double> out) {
  require_same(from.size(), to.size());
  require_same(from.size(), out.size());
  table().perturbed_backpressure(from.data(), to.data(), theta, out.data(), from.size());
}

void linear_coefficients(std::span<const double> weight, std::span<const double> gain,
                         std::span<const double> energy_term, std::span<double> out) {
  require_same(weight.size(), gain.size());
  require_same(weight.size(), energy_term.size());
  require_same(weight.size(), out.size());
  table().linear_coefficients(weight.data(), gain.data(), energy_term.data(), out.data(),
                              weight.size());
}

void gap_objective(std::span<const double> V, std::span<const double> gamma,
                   const GapCoefficients& c, std::span<double> out) {
  require_same(V.size(), gamma.size());
  require_same(V.size(), out.size());
  table().gap_objective(V.data(), gamma.data(), c, out.data(), V.size());
}

}  // namespace ehnet::kernels
