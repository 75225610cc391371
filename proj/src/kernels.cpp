#include "feelab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "feelab/errors.hpp"
#include "kernels_impl.hpp"

namespace feelab::kernels {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool use_avx2(Backend backend) noexcept { return backend == Backend::avx2 && backend_available(Backend::avx2); }

void check_factors(std::span<const double> out, const char* rule) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = out[i];
        if (!(v >= 0.0 && v < 1.0)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s fee factor %.17g at sample %zu outside [0, 1)", rule, v, i);
            throw RangeError(buf);
        }
    }
}

void check_reserves(std::span<const double> x, std::span<const double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(std::isfinite(x[i]) && std::isfinite(y[i]) && x[i] > 0.0 && y[i] > 0.0)) {
            throw DomainError("reserves must be finite and > 0 (sample " + std::to_string(i) + ")");
        }
    }
}

}  // namespace

std::string_view to_string(Backend backend) noexcept { return backend == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend backend) noexcept {
    if (backend == Backend::scalar) return true;
#if defined(FEELAB_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend best_backend() noexcept { return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar; }

void combined_factor_batch(const FeeRule& rule, std::span<const double> x, std::span<const double> y,
                           std::span<double> out, Backend backend) {
    if (x.size() != y.size() || out.size() != x.size()) {
        throw DomainError("batch spans must have equal length");
    }
    check_reserves(x, y);
    const std::size_t n = x.size();
    const bool simd = use_avx2(backend);
    std::visit(overloaded{
                   [&](const ConstantFee& f) { std::fill(out.begin(), out.end(), f.phi); },
                   [&](const LinearFee& f) {
#if defined(FEELAB_BUILD_AVX2)
                       if (simd) {
                           impl::linear_avx2(f.slope, f.k_ref, x.data(), y.data(), out.data(), n);
                           return check_factors(out, "linear");
                       }
#endif
                       impl::linear_scalar(f.slope, f.k_ref, x.data(), y.data(), out.data(), n);
                       check_factors(out, "linear");
                   },
                   [&](const ZeroILFee& f) {
                       for (std::size_t i = 0; i < n; ++i) {
                           if (x[i] * y[i] < f.k_ref) {
                               throw DomainError("zero-IL fee is undefined below its reference invariant (sample " +
                                                 std::to_string(i) + ")");
                           }
                       }
#if defined(FEELAB_BUILD_AVX2)
                       if (simd) {
                           impl::zero_il_reserves_avx2(f.k_ref, x.data(), y.data(), out.data(), n);
                           return check_factors(out, "zero-IL");
                       }
#endif
                       impl::zero_il_reserves_scalar(f.k_ref, x.data(), y.data(), out.data(), n);
                       check_factors(out, "zero-IL");
                   },
                   [&](const PriceRatioFee& f) {
#if defined(FEELAB_BUILD_AVX2)
                       if (simd) {
                           impl::price_ratio_avx2(f.base, x.data(), y.data(), out.data(), n);
                           return check_factors(out, "price-ratio");
                       }
#endif
                       impl::price_ratio_scalar(f.base, x.data(), y.data(), out.data(), n);
                       check_factors(out, "price-ratio");
                   },
                   [&](const CustomFee&) {
                       for (std::size_t i = 0; i < n; ++i) out[i] = combined_factor(rule, x[i], y[i]);
                   },
               },
               rule);
    (void)simd;
}

void zero_il_phi_batch(std::span<const double> deviation, std::span<double> out, Backend backend) {
    if (out.size() != deviation.size()) {
        throw DomainError("batch spans must have equal length");
    }
    for (std::size_t i = 0; i < deviation.size(); ++i) {
        if (!(deviation[i] >= 0.0) || !std::isfinite(deviation[i])) {
            throw DomainError("zero-IL deviation must be finite and >= 0 (sample " + std::to_string(i) + ")");
        }
    }
#if defined(FEELAB_BUILD_AVX2)
    if (use_avx2(backend)) {
        impl::zero_il_deviation_avx2(deviation.data(), out.data(), out.size());
        return;
    }
#endif
    (void)backend;
    impl::zero_il_deviation_scalar(deviation.data(), out.data(), out.size());
}

}  // namespace feelab::kernels
