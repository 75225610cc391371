#pragma once

// Batch fee-factor evaluation over reserve grids. Each entry point has a
// scalar reference implementation and, on x86-64, an AVX2 variant that
// replays the same IEEE operations lane by lane; results are bit-identical.

#include <span>
#include <string_view>

#include "feelab/fees.hpp"

namespace feelab::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend) noexcept;

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend backend) noexcept;

/// Fastest available backend on this machine.
Backend best_backend() noexcept;

/// out[i] = combined_factor(rule, x[i], y[i]) with the same validation:
/// DomainError for reserves <= 0 or a ZeroILFee below its reference,
/// RangeError when a factor leaves [0, 1). Unavailable backends fall back to scalar.
void combined_factor_batch(const FeeRule& rule, std::span<const double> x, std::span<const double> y,
                           std::span<double> out, Backend backend = best_backend());

/// out[i] = zero-IL Phi at relative deviation u[i] = k/k_ref - 1 (u >= 0).
void zero_il_phi_batch(std::span<const double> deviation, std::span<double> out, Backend backend = best_backend());

}  // namespace feelab::kernels
