#include <immintrin.h>

#include "ehnet/kernels.hpp"

namespace ehnet::kernels::detail {
namespace {

void energy_update(const double* E, const double* spent, const double* harvest, double eta,
                   double xi, double* out, std::size_t n) {
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d vxi = _mm256_set1_pd(xi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d kept = _mm256_mul_pd(veta, _mm256_loadu_pd(E + i));
    __m256d drawn = _mm256_div_pd(_mm256_loadu_pd(spent + i), vxi);
    __m256d r = _mm256_add_pd(_mm256_sub_pd(kept, drawn), _mm256_loadu_pd(harvest + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = eta * E[i] - spent[i] / xi + harvest[i];
}

void perturbed_backpressure(const double* from, const double* to, double theta, double* out,
                            std::size_t n) {
  const __m256d vtheta = _mm256_set1_pd(theta);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(from + i), _mm256_loadu_pd(to + i)),
                              vtheta);
    _mm256_storeu_pd(out + i, _mm256_max_pd(d, zero));
  }
  for (; i < n; ++i) {
    const double d = from[i] - to[i] - theta;
    out[i] = d > 0.0 ? d : 0.0;
  }
}

void linear_coefficients(const double* weight, const double* gain, const double* energy_term,
                         double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wg = _mm256_mul_pd(_mm256_loadu_pd(weight + i), _mm256_loadu_pd(gain + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(wg, _mm256_loadu_pd(energy_term + i)));
  }
  for (; i < n; ++i) out[i] = weight[i] * gain[i] + energy_term[i];
}

void gap_objective(const double* V, const double* gamma, const GapCoefficients& c, double* out,
                   std::size_t n) {
  const __m256d va = _mm256_set1_pd(c.a);
  const __m256d vb = _mm256_set1_pd(c.b);
  const __m256d vk = _mm256_set1_pd(c.k);
  const __m256d vhalf = _mm256_set1_pd(0.5);
  const __m256d vleak = _mm256_set1_pd(c.leak);
  const __m256d vcap = _mm256_set1_pd(c.cap);
  const __m256d vn2b1 = _mm256_set1_pd(c.n2_b1);
  const __m256d vn = _mm256_set1_pd(c.n);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(gamma + i);
    const __m256d v = _mm256_loadu_pd(V + i);
    const __m256d kg = _mm256_mul_pd(vk, g);
    const __m256d t1 = _mm256_add_pd(va, kg);
    const __m256d t2 = _mm256_add_pd(vb, kg);
    const __m256d b2 =
        _mm256_mul_pd(vhalf, _mm256_max_pd(_mm256_mul_pd(t1, t1), _mm256_mul_pd(t2, t2)));
    const __m256d u = _mm256_sub_pd(vcap, g);
    const __m256d b3 =
        _mm256_mul_pd(vleak, _mm256_max_pd(_mm256_mul_pd(u, u), _mm256_mul_pd(g, g)));
    const __m256d r = _mm256_add_pd(_mm256_div_pd(vn2b1, v),
                                    _mm256_div_pd(_mm256_mul_pd(vn, _mm256_add_pd(b2, b3)), v));
    _mm256_storeu_pd(out + i, r);
  }
  if (i < n) scalar_table.gap_objective(V + i, gamma + i, c, out + i, n - i);
}

}  // namespace

const KernelTable avx2_table = {energy_update, perturbed_backpressure, linear_coefficients,
                                gap_objective};

}  // namespace ehnet::kernels::detail
