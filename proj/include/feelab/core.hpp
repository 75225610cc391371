#pragma once

#include <cstdint>

namespace feelab {

/// Reserves of a two-token constant-product pool. Both reserves are finite
/// and strictly positive; the constructor enforces it.
class PoolState {
public:
    PoolState(double x, double y);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

    friend bool operator==(const PoolState&, const PoolState&) = default;

private:
    double x_;
    double y_;
};

/// k = x * y
double invariant(const PoolState& pool) noexcept;

/// Instantaneous exchange rate y / x.
double marginal_price(const PoolState& pool) noexcept;

/// Total input of token A executed as `n_splits` equal sub-trades.
class TradeSpec {
public:
    explicit TradeSpec(double dx, std::int64_t n_splits = 1);

    double dx() const noexcept { return dx_; }
    std::int64_t n_splits() const noexcept { return n_splits_; }
    double sub_trade() const noexcept { return dx_ / static_cast<double>(n_splits_); }

private:
    double dx_;
    std::int64_t n_splits_;
};

/// Incidence decomposition of a combined fee factor: gamma1 * gamma2 = 1 - alpha.
struct FeeSplit {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
};

struct TradeOutcome {
    double x_f = 0.0;
    double y_f = 0.0;
    double k_f = 0.0;
    double dy_out = 0.0;
    double p_marginal_f = 0.0;
    double p_effective = 0.0;

    PoolState pool() const { return PoolState(x_f, y_f); }
};

/// Assembles an outcome from final reserves. `k_f` is taken as given so that
/// engines which solve for the invariant directly keep its full precision.
TradeOutcome make_outcome(double x_f, double y_f, double k_f, double dy_out, double dx) noexcept;

/// The trivial outcome of a zero-size trade: pool unchanged, nothing delivered.
TradeOutcome unchanged_outcome(const PoolState& pool) noexcept;

}  // namespace feelab
