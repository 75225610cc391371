#include "feelab/analysis.hpp"

#include <cmath>
#include <string>

#include "feelab/errors.hpp"

namespace feelab {

namespace {

void describe_pool(SeriesTable& table, const PoolState& pool) {
    table.set_meta("x0", format_number(pool.x()));
    table.set_meta("y0", format_number(pool.y()));
}

void describe_config(SeriesTable& table, const EngineConfig& config) {
    table.set_meta("fee", describe(config.fee_rule));
    table.set_meta("engine", std::string(to_string(config.mode)));
    table.set_meta("split", std::string(to_string(config.split_mode)));
}

}  // namespace

ILReport impermanent_loss(const PoolState& pool0, const TradeOutcome& outcome) {
    ILReport r;
    r.price = outcome.y_f / outcome.x_f;
    r.v_hold = r.price * pool0.x() + pool0.y();
    r.v_pool = r.price * outcome.x_f + outcome.y_f;
    r.il_abs = r.v_pool - r.v_hold;
    r.il_rel = r.il_abs / r.v_hold;
    return r;
}

SeriesTable splitting_error(const PoolState& pool0, const EngineConfig& config, double dx,
                            std::span<const std::int64_t> n_values) {
    config.validate();
    for (const auto n : n_values) {
        if (n < 1) throw DomainError("split counts must be >= 1");
    }
    const double k_atomic = execute(pool0, config, TradeSpec(dx, 1)).k_f;

    SeriesTable table("splitting_error", {"N", "error"});
    describe_pool(table, pool0);
    describe_config(table, config);
    table.set_meta("dx", format_number(dx));
    for (const auto n : n_values) {
        const double k_n = execute(pool0, config, TradeSpec(dx, n)).k_f;
        table.add_row({static_cast<double>(n), std::abs(k_n - k_atomic) / k_atomic});
    }
    return table;
}

double relative_effective_price(const PoolState& pool0, const EngineConfig& config, double dx) {
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw DomainError("relative effective price needs dx > 0");
    }
    const TradeOutcome out = execute(pool0, config, TradeSpec(dx, 1));
    const double no_fee = pool0.y() * dx / (pool0.x() + dx);
    return out.dy_out / no_fee;
}

SeriesTable relative_price_curve(const PoolState& pool0, std::span<const Design> designs,
                                 std::span<const double> alphas) {
    std::vector<std::string> cols{"alpha"};
    for (const auto& d : designs) cols.push_back(d.label);
    SeriesTable table("relative_price", std::move(cols));
    describe_pool(table, pool0);
    for (const auto& d : designs) {
        table.set_meta(d.label, describe(d.config.fee_rule) + " " + std::string(to_string(d.config.mode)) + " " +
                                    std::string(to_string(d.config.split_mode)));
    }
    for (const double a : alphas) {
        std::vector<double> row{a};
        for (const auto& d : designs) row.push_back(relative_effective_price(pool0, d.config, a * pool0.x()));
        table.add_row(std::move(row));
    }
    return table;
}

SeriesTable impermanent_loss_curve(const PoolState& pool0, const EngineConfig& config,
                                   std::span<const double> alphas) {
    SeriesTable table("impermanent_loss", {"alpha", "il_abs", "il_rel"});
    describe_pool(table, pool0);
    describe_config(table, config);
    for (const double a : alphas) {
        const auto out = execute(pool0, config, TradeSpec(a * pool0.x(), 1));
        const auto il = impermanent_loss(pool0, out);
        table.add_row({a, il.il_abs, il.il_rel});
    }
    return table;
}

SeriesTable fee_field_grid(const FeeRule& rule, GridAxis x_axis, GridAxis y_axis, kernels::Backend backend) {
    if (!(x_axis.lo > 0.0) || !(y_axis.lo > 0.0)) {
        throw DomainError("fee-field ranges must be positive");
    }
    const auto xs = uniform_grid(x_axis.lo, x_axis.hi, x_axis.points);
    const auto ys = uniform_grid(y_axis.lo, y_axis.hi, y_axis.points);

    std::vector<double> gx;
    std::vector<double> gy;
    gx.reserve(xs.size() * ys.size());
    gy.reserve(xs.size() * ys.size());
    for (const double y : ys) {
        for (const double x : xs) {
            gx.push_back(x);
            gy.push_back(y);
        }
    }
    std::vector<double> alpha(gx.size());
    kernels::combined_factor_batch(rule, gx, gy, alpha, backend);

    SeriesTable table("fee_field", {"x", "y", "alpha", "k"});
    table.set_meta("fee", describe(rule));
    table.set_meta("path_independent", is_path_independent(rule) ? "true" : "false");
    for (std::size_t i = 0; i < gx.size(); ++i) {
        table.add_row({gx[i], gy[i], alpha[i], gx[i] * gy[i]});
    }
    return table;
}

SeriesTable zero_il_fee_curve(double k0, std::span<const double> t_values, kernels::Backend backend) {
    const ZeroILFee rule(k0);
    std::vector<double> deviation;
    deviation.reserve(t_values.size());
    for (const double t : t_values) {
        if (!std::isfinite(t) || t < 1.0) {
            throw DomainError("zero-IL curve needs every t >= 1, got " + format_number(t));
        }
        deviation.push_back(t - 1.0);
    }
    std::vector<double> phi(deviation.size());
    kernels::zero_il_phi_batch(deviation, phi, backend);

    SeriesTable table("zero_il_fee", {"t", "phi"});
    table.set_meta("fee", describe(rule));
    for (std::size_t i = 0; i < phi.size(); ++i) table.add_row({t_values[i], phi[i]});
    return table;
}

RequiredFee zero_il_required_fee(double k_star, double k0) {
    if (!(k0 > 0.0) || !(k0 < k_star) || !std::isfinite(k_star)) {
        throw DomainError("reference invariants must satisfy 0 < k0 < k_star");
    }
    RequiredFee r;
    r.k0 = k0;
    r.alpha = zero_il_alpha_of_t(k_star / k0);
    r.phi = zero_il_phi_of_alpha(r.alpha);
    return r;
}

FeeConflict universal_fee_conflict(double k_star, double k0_a, double k0_b) {
    return {zero_il_required_fee(k_star, k0_a), zero_il_required_fee(k_star, k0_b)};
}

double zero_il_crossover(double constant_phi) {
    if (!(constant_phi >= 0.0 && constant_phi < 1.0)) {
        throw DomainError("constant fee must lie in [0, 1)");
    }
    // 2a / (1 + 2a) = phi  =>  a = phi / (2 (1 - phi))
    const double a = constant_phi / (2.0 * (1.0 - constant_phi));
    return 1.0 + a * a / (1.0 + 2.0 * a);
}

std::vector<double> alpha_grid(double max, std::int64_t points) {
    if (!(max > 0.0) || points < 1) {
        throw DomainError("alpha grid needs max > 0 and at least one point");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    for (std::int64_t i = 1; i <= points; ++i) {
        out.push_back(max * static_cast<double>(i) / static_cast<double>(points));
    }
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::int64_t points) {
    if (points < 2 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("grid needs lo < hi and at least 2 points");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double span = hi - lo;
    for (std::int64_t i = 0; i < points; ++i) {
        out.push_back(i + 1 == points ? hi : lo + span * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return out;
}

}  // namespace feelab
