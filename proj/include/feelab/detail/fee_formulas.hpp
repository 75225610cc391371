#pragma once

// Scalar fee formulas shared by the rule evaluators and the batch kernels.
// The SIMD kernels replay exactly these operation sequences, so any change
// here must be mirrored in kernels_avx2.cpp.

#include <algorithm>
#include <cmath>

namespace feelab::detail {

inline double linear_phi(double slope, double k_ref, double k) noexcept { return slope * k / k_ref; }

/// Nonnegative root of a^2 + 2(1-t)a + (1-t) = 0, written in terms of the
/// relative deviation u = t - 1 so that small deviations keep their digits.
inline double zero_il_alpha_of_deviation(double u) noexcept { return u + std::sqrt(u * (1.0 + u)); }

inline double zero_il_phi_of_alpha(double a) noexcept { return (a + a) / (1.0 + 2.0 * a); }

inline double zero_il_phi(double k_ref, double k) noexcept {
    const double u = (k - k_ref) / k_ref;
    return zero_il_phi_of_alpha(zero_il_alpha_of_deviation(u));
}

inline constexpr double kPriceRatioCap = 0.999;

inline double price_ratio_phi(double base, double x, double y) noexcept {
    return std::min(std::max(base * (y / x), 0.0), kPriceRatioCap);
}

}  // namespace feelab::detail
