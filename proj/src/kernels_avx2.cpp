// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
// Each lane performs the operation sequence of fee_formulas.hpp.

#include <immintrin.h>

#include "feelab/detail/fee_formulas.hpp"
#include "kernels_impl.hpp"

namespace feelab::kernels::impl {

namespace {

inline __m256d zero_il_of_deviation(__m256d u) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d a = _mm256_add_pd(u, _mm256_sqrt_pd(_mm256_mul_pd(u, _mm256_add_pd(one, u))));
    return _mm256_div_pd(_mm256_add_pd(a, a), _mm256_add_pd(one, _mm256_mul_pd(two, a)));
}

}  // namespace

void linear_avx2(double slope, double k_ref, const double* x, const double* y, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(slope);
    const __m256d vr = _mm256_set1_pd(k_ref);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d k = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(vs, k), vr));
    }
    for (; i < n; ++i) out[i] = detail::linear_phi(slope, k_ref, x[i] * y[i]);
}

void zero_il_reserves_avx2(double k_ref, const double* x, const double* y, double* out, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(k_ref);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d k = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        const __m256d u = _mm256_div_pd(_mm256_sub_pd(k, vr), vr);
        _mm256_storeu_pd(out + i, zero_il_of_deviation(u));
    }
    for (; i < n; ++i) out[i] = detail::zero_il_phi(k_ref, x[i] * y[i]);
}

void zero_il_deviation_avx2(const double* u, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, zero_il_of_deviation(_mm256_loadu_pd(u + i)));
    }
    for (; i < n; ++i) out[i] = detail::zero_il_phi_of_alpha(detail::zero_il_alpha_of_deviation(u[i]));
}

void price_ratio_avx2(double base, const double* x, const double* y, double* out, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(base);
    const __m256d lo = _mm256_setzero_pd();
    const __m256d hi = _mm256_set1_pd(detail::kPriceRatioCap);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ratio = _mm256_div_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
        const __m256d v = _mm256_mul_pd(vb, ratio);
        _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(v, lo), hi));
    }
    for (; i < n; ++i) out[i] = detail::price_ratio_phi(base, x[i], y[i]);
}

}  // namespace feelab::kernels::impl
