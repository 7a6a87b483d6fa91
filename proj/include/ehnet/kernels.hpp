#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops with a scalar reference and vector variants.
// Every variant performs the same IEEE operations in the same order, so the
// results are bitwise identical to the scalar reference (no FMA contraction).

namespace ehnet::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU, unless overridden by the
/// EHNET_KERNELS environment variable ("scalar", "avx2", "neon").
Isa active_isa();
bool isa_supported(Isa isa);

/// Coefficients of the optimality-gap objective
///   n2_b1 / V + n * (B2(gamma) + B3(gamma)) / V
/// with B2 = 0.5 * max((a + k*gamma)^2, (b + k*gamma)^2) and
///      B3 = leak * max((cap - gamma)^2, gamma^2).
struct GapCoefficients {
  double n2_b1 = 0;
  double n = 0;
  double a = 0;     // P_max / xi
  double b = 0;     // -xi * e_max
  double k = 0;     // 1 - eta
  double leak = 0;  // eta * (1 - eta)
  double cap = 0;   // E_max
};

struct KernelTable {
  // out[i] = eta*E[i] - spent[i]/xi + harvest[i]
  void (*energy_update)(const double* E, const double* spent, const double* harvest, double eta,
                        double xi, double* out, std::size_t n);
  // out[i] = max(from[i] - to[i] - theta, 0)
  void (*perturbed_backpressure)(const double* from, const double* to, double theta, double* out,
                                 std::size_t n);
  // out[i] = weight[i]*gain[i] + energy_term[i]
  void (*linear_coefficients)(const double* weight, const double* gain, const double* energy_term,
                              double* out, std::size_t n);
  void (*gap_objective)(const double* V, const double* gamma, const GapCoefficients& c, double* out,
                        std::size_t n);
};

const KernelTable& table(Isa isa);
const KernelTable& table();

// Span front-ends over the active table. Sizes must agree.
void energy_update(std::span<const double> E, std::span<const double> spent,
                   std::span<const double> harvest, double eta, double xi, std::span<double> out);
void perturbed_backpressure(std::span<const double> from, std::span<const double> to, double theta,
                            std::span<double> out);
void linear_coefficients(std::span<const double> weight, std::span<const double> gain,
                         std::span<const double> energy_term, std::span<double> out);
void gap_objective(std::span<const double> V, std::span<const double> gamma,
                   const GapCoefficients& c, std::span<double> out);

namespace detail {
extern const KernelTable scalar_table;
#if defined(EHNET_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(EHNET_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace ehnet::kernels
