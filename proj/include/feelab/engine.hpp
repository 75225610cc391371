#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "feelab/core.hpp"
#include "feelab/fees.hpp"

namespace feelab {

enum class EngineMode { continuous, discrete };

EngineMode parse_engine_mode(std::string_view text);
std::string_view to_string(EngineMode mode) noexcept;

struct SolverTolerances {
    double quad_rel_tol = 1e-10;
    double root_rel_tol = 1e-10;
};

/// Selects how swap_continuous obtains k_f. `automatic` uses the closed forms
/// where one exists; `numeric` always solves G(k_f) - G(k0) = ln(1 + dx/x0)
/// by quadrature and root-finding.
enum class ContinuousPath { automatic, numeric };

struct EngineConfig {
    EngineMode mode = EngineMode::continuous;
    FeeRule fee_rule = ConstantFee(0.003);
    SplitMode split_mode = SplitMode::balanced;
    SolverTolerances tolerances{};

    /// Throws DomainError when continuous mode is paired with a path-dependent rule.
    void validate() const;
};

struct TrajectorySample {
    double s;
    double x;
    double y;
    double k;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

/// Upper bound on stored trajectory samples, excluding the initial state.
inline constexpr std::int64_t kMaxTrajectorySamples = 1024;

/// Final invariant after feeding `dx` of token A into a pool with invariant
/// `k0` and reserve `x0`, under a path-independent rule.
double solve_final_invariant(const FeeRule& rule, double k0, double x0, double dx,
                             const SolverTolerances& tol = {}, ContinuousPath path = ContinuousPath::automatic);

/// One trade under the continuous (path-independent) model.
TradeOutcome swap_continuous(const PoolState& pool, const FeeRule& rule, double dx,
                             const SolverTolerances& tol = {}, ContinuousPath path = ContinuousPath::automatic);

/// Applies swap_continuous to each fragment in turn; dy_out accumulates.
TradeOutcome swap_continuous_fragments(const PoolState& pool, const FeeRule& rule, std::span<const double> fragments,
                                       const SolverTolerances& tol = {},
                                       ContinuousPath path = ContinuousPath::automatic);

/// Sequence of equal sub-swaps with per-sub-swap fee reinvestment:
/// input fully retained, trader receives gamma2 * dy_raw where
/// (x + gamma1 d)(y - dy_raw) = x y.
TradeOutcome swap_discrete(const PoolState& pool, const FeeRule& rule, const TradeSpec& spec,
                           SplitMode split_mode = SplitMode::balanced);

/// RK4 solution of dx/ds = 1, dy/ds = -(1 - Phi(k)) y / x, dk/ds = Phi(k) k / x
/// for s in [0, dx].
Trajectory ode_trajectory(const PoolState& pool, const FeeRule& rule, double dx, std::int64_t steps);

/// Runs `spec` under `config`: equal fragments through the continuous solver,
/// or the discrete engine.
TradeOutcome execute(const PoolState& pool, const EngineConfig& config, const TradeSpec& spec);

}  // namespace feelab
