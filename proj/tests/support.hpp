#pragma once

// Test-only helpers: tolerance checks, a seeded generator for property tests,
// and brute-force oracles that share no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace feelab::test {

inline double rel_err(double actual, double expected) {
    const double scale = std::max(std::abs(expected), 1e-300);
    return std::abs(actual - expected) / scale;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
    }

private:
    std::mt19937_64 gen_;
};

inline constexpr int kPropertyCases = 200;

/// Composite Simpson on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Plain bisection to the last representable double.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Least-squares slope of log(err) against log(n).
template <class Xs, class Ys>
double loglog_slope(const Xs& xs, const Ys& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(static_cast<double>(xs[i]));
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace feelab::test
