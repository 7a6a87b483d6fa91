#include <arm_neon.h>

#include "ehnet/kernels.hpp"

namespace ehnet::kernels::detail {
namespace {

// vmaxq_f64 propagates NaN, unlike MAXPD; select explicitly so the lane
// rule matches the scalar reference.
inline float64x2_t vsel_max(float64x2_t x, float64x2_t y) {
  return vbslq_f64(vcgtq_f64(x, y), x, y);
}

void energy_update(const double* E, const double* spent, const double* harvest, double eta,
                   double xi, double* out, std::size_t n) {
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t vxi = vdupq_n_f64(xi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t kept = vmulq_f64(veta, vld1q_f64(E + i));
    float64x2_t drawn = vdivq_f64(vld1q_f64(spent + i), vxi);
    vst1q_f64(out + i, vaddq_f64(vsubq_f64(kept, drawn), vld1q_f64(harvest + i)));
  }
  for (; i < n; ++i) out[i] = eta * E[i] - spent[i] / xi + harvest[i];
}

void perturbed_backpressure(const double* from, const double* to, double theta, double* out,
                            std::size_t n) {
  const float64x2_t vtheta = vdupq_n_f64(theta);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vsubq_f64(vsubq_f64(vld1q_f64(from + i), vld1q_f64(to + i)), vtheta);
    vst1q_f64(out + i, vsel_max(d, zero));
  }
  for (; i < n; ++i) {
    const double d = from[i] - to[i] - theta;
    out[i] = d > 0.0 ? d : 0.0;
  }
}

void linear_coefficients(const double* weight, const double* gain, const double* energy_term,
                         double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t wg = vmulq_f64(vld1q_f64(weight + i), vld1q_f64(gain + i));
    vst1q_f64(out + i, vaddq_f64(wg, vld1q_f64(energy_term + i)));
  }
  for (; i < n; ++i) out[i] = weight[i] * gain[i] + energy_term[i];
}

void gap_objective(const double* V, const double* gamma, const GapCoefficients& c, double* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vld1q_f64(gamma + i);
    const float64x2_t v = vld1q_f64(V + i);
    const float64x2_t kg = vmulq_f64(vdupq_n_f64(c.k), g);
    const float64x2_t t1 = vaddq_f64(vdupq_n_f64(c.a), kg);
    const float64x2_t t2 = vaddq_f64(vdupq_n_f64(c.b), kg);
    const float64x2_t b2 = vmulq_f64(vdupq_n_f64(0.5), vsel_max(vmulq_f64(t1, t1), vmulq_f64(t2, t2)));
    const float64x2_t u = vsubq_f64(vdupq_n_f64(c.cap), g);
    const float64x2_t b3 = vmulq_f64(vdupq_n_f64(c.leak), vsel_max(vmulq_f64(u, u), vmulq_f64(g, g)));
    const float64x2_t r = vaddq_f64(vdivq_f64(vdupq_n_f64(c.n2_b1), v),
                                    vdivq_f64(vmulq_f64(vdupq_n_f64(c.n), vaddq_f64(b2, b3)), v));
    vst1q_f64(out + i, r);
  }
  if (i < n) scalar_table.gap_objective(V + i, gamma + i, c, out + i, n - i);
}

}  // namespace

const KernelTable neon_table = {energy_update, perturbed_backpressure, linear_coefficients,
                                gap_objective};

}  // namespace ehnet::kernels::detail
