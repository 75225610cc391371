#include "feelab/core.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "feelab/errors.hpp"

namespace feelab {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "DomainError";
        case ErrorKind::range: return "RangeError";
        case ErrorKind::no_bracket: return "NoBracket";
        case ErrorKind::non_convergence: return "NonConvergence";
        case ErrorKind::non_finite: return "NonFinite";
    }
    return "Error";
}

PoolState::PoolState(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("pool reserves must be finite");
    }
    if (x <= 0.0 || y <= 0.0) {
        throw DomainError("pool reserves must be strictly positive (x=" + shortest(x) + ", y=" + shortest(y) + ")");
    }
}

double invariant(const PoolState& pool) noexcept { return pool.x() * pool.y(); }

double marginal_price(const PoolState& pool) noexcept { return pool.y() / pool.x(); }

TradeSpec::TradeSpec(double dx, std::int64_t n_splits) : dx_(dx), n_splits_(n_splits) {
    if (!std::isfinite(dx) || dx < 0.0) {
        throw DomainError("trade size dx must be finite and >= 0");
    }
    if (n_splits < 1) {
        throw DomainError("n_splits must be >= 1");
    }
}

TradeOutcome make_outcome(double x_f, double y_f, double k_f, double dy_out, double dx) noexcept {
    TradeOutcome out;
    out.x_f = x_f;
    out.y_f = y_f;
    out.k_f = k_f;
    out.dy_out = dy_out;
    out.p_marginal_f = y_f / x_f;
    out.p_effective = dx > 0.0 ? dy_out / dx : 0.0;
    return out;
}

TradeOutcome unchanged_outcome(const PoolState& pool) noexcept {
    return make_outcome(pool.x(), pool.y(), invariant(pool), 0.0, 0.0);
}

}  // namespace feelab
