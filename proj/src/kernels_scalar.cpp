#include "kernels_impl.hpp"

#include "feelab/detail/fee_formulas.hpp"

namespace feelab::kernels::impl {

void linear_scalar(double slope, double k_ref, const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::linear_phi(slope, k_ref, x[i] * y[i]);
}

void zero_il_reserves_scalar(double k_ref, const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::zero_il_phi(k_ref, x[i] * y[i]);
}

void zero_il_deviation_scalar(const double* u, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = detail::zero_il_phi_of_alpha(detail::zero_il_alpha_of_deviation(u[i]));
    }
}

void price_ratio_scalar(double base, const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::price_ratio_phi(base, x[i], y[i]);
}

}  // namespace feelab::kernels::impl
