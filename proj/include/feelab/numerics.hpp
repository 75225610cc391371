#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "feelab/errors.hpp"

namespace feelab::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double est_error = 0.0;
    std::int64_t evaluations = 0;
};

/// How to treat the left endpoint. `automatic` probes f(a) and switches to the
/// square-root substitution when it is not finite.
enum class LeftEndpoint { automatic, regular, inverse_sqrt };

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int max_depth = 60;
    LeftEndpoint left = LeftEndpoint::automatic;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
///
/// Integrable singularities of type (x - a)^(-1/2) at the left endpoint are
/// removed with x = a + v^2 before subdivision.
QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol = 1e-10);
QuadratureResult integrate(const ScalarFn& f, double a, double b, const QuadratureOptions& options);

/// Same as integrate() but f receives the offset u = x - a in [0, b - a].
/// Callers whose integrand is singular at a can then evaluate it without the
/// cancellation in (a + u) - a.
QuadratureResult integrate_offset(const ScalarFn& f_of_offset, double a, double b,
                                  const QuadratureOptions& options = {});

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Brent's method: bisection safeguarded with inverse quadratic / secant steps.
/// Requires g(lo) * g(hi) <= 0; the returned root always lies in [lo, hi].
RootResult find_root(const ScalarFn& g, double lo, double hi, double rel_tol = 1e-10, int max_iter = 200);

template <std::size_t N>
using State = std::array<double, N>;

struct Rk4Options {
    /// Reject states with any component <= 0 (pool reserves and invariants).
    bool require_positive = false;
};

/// Classical fixed-step fourth-order Runge-Kutta from s0 to s1.
/// `observe(step_index, s, state)` is called after every step.
template <std::size_t N, class Rhs, class Observer>
State<N> rk4_integrate(Rhs&& rhs, double s0, double s1, State<N> state, std::int64_t steps, Observer&& observe,
                       Rk4Options options = {}) {
    if (steps < 1) {
        throw DomainError("rk4 requires at least one step");
    }
    const double h = (s1 - s0) / static_cast<double>(steps);
    const auto axpy = [](const State<N>& y, double a, const State<N>& d) {
        State<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * d[i];
        return r;
    };
    for (std::int64_t n = 0; n < steps; ++n) {
        const double s = s0 + static_cast<double>(n) * h;
        const State<N> k1 = rhs(s, state);
        const State<N> k2 = rhs(s + 0.5 * h, axpy(state, 0.5 * h, k1));
        const State<N> k3 = rhs(s + 0.5 * h, axpy(state, 0.5 * h, k2));
        const State<N> k4 = rhs(s + h, axpy(state, h, k3));
        for (std::size_t i = 0; i < N; ++i) {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(state[i]) || (options.require_positive && state[i] <= 0.0)) {
                throw NonFinite("rk4 state left the valid region at step " + std::to_string(n + 1));
            }
        }
        observe(n + 1, n + 1 == steps ? s1 : s + h, state);
    }
    return state;
}

template <std::size_t N, class Rhs>
State<N> rk4_integrate(Rhs&& rhs, double s0, double s1, State<N> state, std::int64_t steps,
                       Rk4Options options = {}) {
    return rk4_integrate<N>(std::forward<Rhs>(rhs), s0, s1, state, steps,
                            [](std::int64_t, double, const State<N>&) {}, options);
}

}  // namespace feelab::numerics
