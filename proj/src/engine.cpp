#include "feelab/engine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "feelab/detail/fee_formulas.hpp"
#include "feelab/errors.hpp"
#include "feelab/numerics.hpp"

namespace feelab {

namespace {

// Relative slack under which a pool counts as sitting at a zero-IL reference.
constexpr double kReferenceSlack = 8.0 * std::numeric_limits<double>::epsilon();

void require_trade(double dx) {
    if (!std::isfinite(dx) || dx < 0.0) {
        throw DomainError("trade size dx must be finite and >= 0");
    }
}

void require_path_independent(const FeeRule& rule) {
    if (!is_path_independent(rule)) {
        throw DomainError("the continuous engine requires a path-independent fee rule, got " + describe(rule));
    }
}

// Relative distance of k0 above a zero-IL reference, snapped to 0 within
// rounding of the reference itself.
double zero_il_deviation(const ZeroILFee& fee, double k0) {
    const double u = (k0 - fee.k_ref) / fee.k_ref;
    if (std::abs(u) <= kReferenceSlack) return 0.0;
    if (u < 0.0) {
        throw DomainError("pool invariant lies below the zero-IL reference invariant");
    }
    return u;
}

// Phi(k0 + u) with the zero-IL deviation formed without cancellation.
double phi_at_offset(const FeeRule& rule, double k0, double u) {
    if (const auto* z = std::get_if<ZeroILFee>(&rule)) {
        const double dev = ((k0 - z->k_ref) + u) / z->k_ref;
        if (dev < -kReferenceSlack) {
            throw DomainError("zero-IL fee is undefined below its reference invariant");
        }
        return detail::zero_il_phi_of_alpha(detail::zero_il_alpha_of_deviation(std::max(dev, 0.0)));
    }
    return eval_phi(rule, k0 + u);
}

double numeric_final_invariant(const FeeRule& rule, double k0, double log_growth, double growth,
                               const SolverTolerances& tol) {
    if (const auto* c = std::get_if<ConstantFee>(&rule); c && c->phi == 0.0) {
        return k0;
    }
    numerics::QuadratureOptions qopt;
    qopt.rel_tol = tol.quad_rel_tol;
    const numerics::ScalarFn integrand = [&](double u) {
        const double phi = phi_at_offset(rule, k0, u);
        return 1.0 / (phi * (k0 + u));
    };
    const auto potential_gap = [&](double k) {
        return numerics::integrate_offset(integrand, k0, k, qopt).value - log_growth;
    };

    // dk <= k dx / x pointwise while Phi < 1, so k0 * (1 + dx/x0) brackets k_f.
    double hi = k0 * growth;
    double gap_hi = 0.0;
    try {
        gap_hi = potential_gap(hi);
    } catch (const RangeError&) {
        // Phi reaches 1 inside the bracket; pull hi back to the last admissible invariant.
        double ok = k0;
        double bad = hi;
        for (int i = 0; i < 200 && bad - ok > 1e-15 * bad; ++i) {
            const double mid = 0.5 * (ok + bad);
            try {
                (void)eval_phi(rule, mid);
                ok = mid;
            } catch (const RangeError&) {
                bad = mid;
            }
        }
        hi = ok;
        gap_hi = potential_gap(hi);
        if (gap_hi < 0.0) {
            throw RangeError("fee factor reaches 1 before the trade completes");
        }
    }
    if (gap_hi == 0.0) return hi;
    const auto root = numerics::find_root(potential_gap, k0, hi, tol.root_rel_tol);
    return root.root;
}

double analytic_final_invariant(const FeeRule& rule, double k0, double x0, double dx, double log_growth,
                                const SolverTolerances& tol) {
    if (const auto* c = std::get_if<ConstantFee>(&rule)) {
        return k0 * std::exp(c->phi * log_growth);
    }
    if (std::get_if<LinearFee>(&rule)) {
        // G(k) = -k_ref / (slope k)  =>  1/k_f = 1/k0 - (slope/k_ref) ln(1 + dx/x0)
        const double denom = 1.0 - eval_phi(rule, k0) * log_growth;
        if (!(denom > 0.0)) {
            throw RangeError("linear fee diverges before the trade completes");
        }
        return k0 / denom;
    }
    if (const auto* z = std::get_if<ZeroILFee>(&rule)) {
        // G(k) = ln(1 + a(k / k_ref)) for this family, so (1 + a) scales like x.
        const double a0 = detail::zero_il_alpha_of_deviation(zero_il_deviation(*z, k0));
        const double r = dx / x0;
        const double a_f = a0 + r + a0 * r;
        return a0 == 0.0 ? zero_il_target_k(k0, a_f) : zero_il_target_k(z->k_ref, a_f);
    }
    return numeric_final_invariant(rule, k0, log_growth, 1.0 + dx / x0, tol);
}

}  // namespace

EngineMode parse_engine_mode(std::string_view text) {
    if (text == "continuous") return EngineMode::continuous;
    if (text == "discrete") return EngineMode::discrete;
    throw DomainError("unknown engine '" + std::string(text) + "' (expected continuous or discrete)");
}

std::string_view to_string(EngineMode mode) noexcept {
    return mode == EngineMode::continuous ? "continuous" : "discrete";
}

void EngineConfig::validate() const {
    if (mode == EngineMode::continuous) {
        require_path_independent(fee_rule);
    }
    if (!(tolerances.quad_rel_tol > 0.0) || !(tolerances.root_rel_tol > 0.0)) {
        throw DomainError("solver tolerances must be > 0");
    }
}

double solve_final_invariant(const FeeRule& rule, double k0, double x0, double dx, const SolverTolerances& tol,
                             ContinuousPath path) {
    require_path_independent(rule);
    require_trade(dx);
    if (dx == 0.0) return k0;

    if (const auto* z = std::get_if<ZeroILFee>(&rule)) {
        (void)zero_il_deviation(*z, k0);
    }
    // Fails fast with RangeError when the starting factor is already >= 1.
    (void)phi_at_offset(rule, k0, 0.0);

    const double log_growth = std::log1p(dx / x0);
    const double k_f = path == ContinuousPath::numeric
                           ? numeric_final_invariant(rule, k0, log_growth, 1.0 + dx / x0, tol)
                           : analytic_final_invariant(rule, k0, x0, dx, log_growth, tol);
    if (!std::isfinite(k_f) || k_f <= 0.0) {
        throw NonFinite("final invariant is not finite");
    }
    (void)phi_at_offset(rule, k0, k_f - k0);
    return k_f;
}

TradeOutcome swap_continuous(const PoolState& pool, const FeeRule& rule, double dx, const SolverTolerances& tol,
                             ContinuousPath path) {
    require_path_independent(rule);
    require_trade(dx);
    if (dx == 0.0) return unchanged_outcome(pool);

    const double k0 = invariant(pool);
    const double k_f = solve_final_invariant(rule, k0, pool.x(), dx, tol, path);
    const double x_f = pool.x() + dx;
    const double y_f = k_f / x_f;
    return make_outcome(x_f, y_f, k_f, pool.y() - y_f, dx);
}

TradeOutcome swap_continuous_fragments(const PoolState& pool, const FeeRule& rule, std::span<const double> fragments,
                                       const SolverTolerances& tol, ContinuousPath path) {
    TradeOutcome out = unchanged_outcome(pool);
    PoolState current = pool;
    double total = 0.0;
    double received = 0.0;
    for (const double dx : fragments) {
        out = swap_continuous(current, rule, dx, tol, path);
        current = out.pool();
        total += dx;
        received += out.dy_out;
    }
    return make_outcome(out.x_f, out.y_f, out.k_f, received, total);
}

TradeOutcome swap_discrete(const PoolState& pool, const FeeRule& rule, const TradeSpec& spec, SplitMode split_mode) {
    if (spec.dx() == 0.0) return unchanged_outcome(pool);

    const double step = spec.sub_trade();
    double x = pool.x();
    double y = pool.y();
    double received = 0.0;
    for (std::int64_t i = 0; i < spec.n_splits(); ++i) {
        const FeeSplit split = split_factor(combined_factor(rule, x, y), split_mode);
        const double effective_in = split.gamma1 * step;
        const double raw_out = y * effective_in / (x + effective_in);
        const double paid = split.gamma2 * raw_out;
        const double y_next = y - paid;
        if (!(y_next > 0.0)) {
            throw RangeError("sub-swap " + std::to_string(i + 1) + " would drain reserve y");
        }
        x += step;
        y = y_next;
        received += paid;
    }
    return make_outcome(x, y, x * y, received, spec.dx());
}

Trajectory ode_trajectory(const PoolState& pool, const FeeRule& rule, double dx, std::int64_t steps) {
    require_path_independent(rule);
    require_trade(dx);
    if (steps < 1) {
        throw DomainError("ode_trajectory requires steps >= 1");
    }
    Trajectory traj;
    const double k0 = invariant(pool);
    traj.samples.push_back({0.0, pool.x(), pool.y(), k0});
    if (dx == 0.0) return traj;

    if (const auto* z = std::get_if<ZeroILFee>(&rule); z && zero_il_deviation(*z, k0) == 0.0) {
        throw DomainError(
            "zero-IL fee at its reference has Phi(k0) = 0 with unbounded slope; the trajectory ODE is not "
            "uniquely solvable from this state, use swap_continuous");
    }

    using State = numerics::State<3>;
    const auto rhs = [&rule](double, const State& st) -> State {
        const double phi = eval_phi(rule, st[2]);
        return {1.0, -(1.0 - phi) * st[1] / st[0], phi * st[2] / st[0]};
    };
    const std::int64_t stride = (steps + kMaxTrajectorySamples - 1) / kMaxTrajectorySamples;
    traj.samples.reserve(static_cast<std::size_t>(std::min(steps, kMaxTrajectorySamples)) + 1);
    const auto observe = [&](std::int64_t n, double s, const State& st) {
        if (n % stride == 0 || n == steps) {
            traj.samples.push_back({s, st[0], st[1], st[2]});
        }
    };
    numerics::rk4_integrate<3>(rhs, 0.0, dx, State{pool.x(), pool.y(), k0}, steps, observe,
                               numerics::Rk4Options{.require_positive = true});
    return traj;
}

TradeOutcome execute(const PoolState& pool, const EngineConfig& config, const TradeSpec& spec) {
    config.validate();
    if (config.mode == EngineMode::discrete) {
        return swap_discrete(pool, config.fee_rule, spec, config.split_mode);
    }
    const std::vector<double> fragments(static_cast<std::size_t>(spec.n_splits()), spec.sub_trade());
    return swap_continuous_fragments(pool, config.fee_rule, fragments, config.tolerances);
}

}  // namespace feelab
