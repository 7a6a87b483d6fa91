#include "ehnet/kernels.hpp"

namespace ehnet::kernels::detail {
namespace {

// Same selection rule as MAXPD / FMAX on vector units: (x > y) ? x : y.
inline double vmax(double x, double y) { return x > y ? x : y; }

void energy_update(const double* E, const double* spent, const double* harvest, double eta,
                   double xi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = eta * E[i] - spent[i] / xi + harvest[i];
}

void perturbed_backpressure(const double* from, const double* to, double theta, double* out,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = vmax(from[i] - to[i] - theta, 0.0);
}

void linear_coefficients(const double* weight, const double* gain, const double* energy_term,
                         double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = weight[i] * gain[i] + energy_term[i];
}

void gap_objective(const double* V, const double* gamma, const GapCoefficients& c, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma[i];
    const double t1 = c.a + c.k * g;
    const double t2 = c.b + c.k * g;
    const double b2 = 0.5 * vmax(t1 * t1, t2 * t2);
    const double u = c.cap - g;
    const double b3 = c.leak * vmax(u * u, g * g);
    out[i] = c.n2_b1 / V[i] + (c.n * (b2 + b3)) / V[i];
  }
}

}  // namespace

const KernelTable scalar_table = {energy_update, perturbed_backpressure, linear_coefficients,
                                  gap_objective};

}  // namespace ehnet::kernels::detail
