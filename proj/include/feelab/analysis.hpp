#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "feelab/core.hpp"
#include "feelab/engine.hpp"
#include "feelab/fees.hpp"
#include "feelab/kernels.hpp"
#include "feelab/series.hpp"

namespace feelab {

/// Liquidity-provider position against holding, valued in token A units at
/// the post-trade marginal price.
struct ILReport {
    double price = 0.0;
    double v_hold = 0.0;
    double v_pool = 0.0;
    double il_abs = 0.0;
    double il_rel = 0.0;
};

ILReport impermanent_loss(const PoolState& pool0, const TradeOutcome& outcome);

/// Error(N) = |k_f(N) - k_f(1)| / k_f(1) for each N, columns (N, error).
SeriesTable splitting_error(const PoolState& pool0, const EngineConfig& config, double dx,
                            std::span<const std::int64_t> n_values);

/// Trader's realised rate over the no-fee rate y0 dx / (x0 + dx), for a single
/// (unsplit) trade. DomainError for dx = 0.
double relative_effective_price(const PoolState& pool0, const EngineConfig& config, double dx);

struct Design {
    std::string label;
    EngineConfig config;
};

/// Columns (alpha, <label>...) with p_rel of each design at dx = alpha * x0.
SeriesTable relative_price_curve(const PoolState& pool0, std::span<const Design> designs,
                                 std::span<const double> alphas);

/// Columns (alpha, il_abs, il_rel) at dx = alpha * x0.
SeriesTable impermanent_loss_curve(const PoolState& pool0, const EngineConfig& config, std::span<const double> alphas);

struct GridAxis {
    double lo;
    double hi;
    std::int64_t points;
};

/// alpha(x, y) on a uniform grid, row-major in y then x; columns (x, y, alpha, k).
SeriesTable fee_field_grid(const FeeRule& rule, GridAxis x_axis, GridAxis y_axis,
                           kernels::Backend backend = kernels::best_backend());

/// Columns (t, phi) with phi = Phi_{k0}(t k0). DomainError for any t < 1.
SeriesTable zero_il_fee_curve(double k0, std::span<const double> t_values,
                              kernels::Backend backend = kernels::best_backend());

/// Fee value at k_star demanded by the zero-IL construction started from k0.
struct RequiredFee {
    double k0 = 0.0;
    double alpha = 0.0;
    double phi = 0.0;
};

RequiredFee zero_il_required_fee(double k_star, double k0);

struct FeeConflict {
    RequiredFee a;
    RequiredFee b;

    bool conflicting() const noexcept { return a.phi != b.phi; }
};

/// Two reference states that both pass through k_star require different fee
/// values there. DomainError unless 0 < k0 < k_star for both.
FeeConflict universal_fee_conflict(double k_star, double k0_a, double k0_b);

/// Relative invariant t* where the zero-IL fee equals a constant fee phi.
double zero_il_crossover(double constant_phi);

/// `points` evenly spaced values in (0, max]: max * i / points, i = 1..points.
std::vector<double> alpha_grid(double max, std::int64_t points);

/// `points` evenly spaced values in [lo, hi] inclusive; points >= 2.
std::vector<double> uniform_grid(double lo, double hi, std::int64_t points);

}  // namespace feelab
