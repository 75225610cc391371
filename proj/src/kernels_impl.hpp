#pragma once

#include <cstddef>

namespace feelab::kernels::impl {

void linear_scalar(double slope, double k_ref, const double* x, const double* y, double* out, std::size_t n);
void zero_il_reserves_scalar(double k_ref, const double* x, const double* y, double* out, std::size_t n);
void zero_il_deviation_scalar(const double* u, double* out, std::size_t n);
void price_ratio_scalar(double base, const double* x, const double* y, double* out, std::size_t n);

#if defined(FEELAB_BUILD_AVX2)
void linear_avx2(double slope, double k_ref, const double* x, const double* y, double* out, std::size_t n);
void zero_il_reserves_avx2(double k_ref, const double* x, const double* y, double* out, std::size_t n);
void zero_il_deviation_avx2(const double* u, double* out, std::size_t n);
void price_ratio_avx2(double base, const double* x, const double* y, double* out, std::size_t n);
#endif

}  // namespace feelab::kernels::impl
