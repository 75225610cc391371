#include "feelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace feelab::numerics {

namespace {

// Kronrod abscissae on [-1, 1] (nonnegative half) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double kronrod;
    double error;
};

class Integrator {
public:
    Integrator(const ScalarFn& f, int max_depth) : f_(f), max_depth_(max_depth) {}

    Panel rule(double a, double b) {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const double fc = eval(center);
        double kronrod = fc * kWgk[7];
        double gauss = fc * kWg[3];
        for (int j = 0; j < 7; ++j) {
            const double dx = half * kXgk[j];
            const double pair = eval(center - dx) + eval(center + dx);
            kronrod += kWgk[j] * pair;
            if (j % 2 == 1) gauss += kWg[j / 2] * pair;
        }
        return {kronrod * half, std::abs((kronrod - gauss) * half)};
    }

    // Tolerance is distributed in proportion to panel width.
    void refine(double a, double b, const Panel& whole, double tol_per_width, int depth) {
        const double local_tol = tol_per_width * (b - a);
        const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(whole.kronrod);
        if (whole.error <= local_tol || whole.error <= roundoff) {
            value_ += whole.kronrod;
            error_ += whole.error;
            return;
        }
        const double mid = 0.5 * (a + b);
        if (depth >= max_depth_ || mid <= a || mid >= b) {
            throw NonConvergence("adaptive quadrature exceeded " + std::to_string(max_depth_) +
                                 " subdivision levels");
        }
        const Panel left = rule(a, mid);
        const Panel right = rule(mid, b);
        refine(a, mid, left, tol_per_width, depth + 1);
        refine(mid, b, right, tol_per_width, depth + 1);
    }

    double eval(double x) {
        const double v = f_(x);
        ++evaluations_;
        if (!std::isfinite(v)) {
            throw NonFinite("integrand is not finite at interior point " + std::to_string(x));
        }
        return v;
    }

    QuadratureResult run(double a, double b, double rel_tol) {
        const Panel whole = rule(a, b);
        const double scale = std::abs(whole.kronrod) > 0.0 ? std::abs(whole.kronrod) : 1.0;
        refine(a, b, whole, rel_tol * scale / (b - a), 0);
        return {value_, error_, evaluations_};
    }

    std::int64_t evaluations_ = 0;

private:
    const ScalarFn& f_;
    int max_depth_;
    double value_ = 0.0;
    double error_ = 0.0;
};

void check_interval(double a, double b, double rel_tol) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw DomainError("integration interval must be finite with a <= b");
    }
    if (!(rel_tol > 0.0)) {
        throw DomainError("rel_tol must be > 0");
    }
}

}  // namespace

QuadratureResult integrate_offset(const ScalarFn& f_of_offset, double a, double b, const QuadratureOptions& options) {
    check_interval(a, b, options.rel_tol);
    if (a == b) {
        return {};
    }
    const double width = b - a;

    LeftEndpoint left = options.left;
    std::int64_t probes = 0;
    if (left == LeftEndpoint::automatic) {
        ++probes;
        left = std::isfinite(f_of_offset(0.0)) ? LeftEndpoint::regular : LeftEndpoint::inverse_sqrt;
    }

    QuadratureResult result;
    if (left == LeftEndpoint::regular) {
        Integrator integrator(f_of_offset, options.max_depth);
        result = integrator.run(0.0, width, options.rel_tol);
    } else {
        // u = v^2, du = 2 v dv turns u^(-1/2) into a bounded integrand.
        const ScalarFn substituted = [&f_of_offset](double v) { return 2.0 * v * f_of_offset(v * v); };
        Integrator integrator(substituted, options.max_depth);
        result = integrator.run(0.0, std::sqrt(width), options.rel_tol);
    }
    result.evaluations += probes;
    return result;
}

QuadratureResult integrate(const ScalarFn& f, double a, double b, const QuadratureOptions& options) {
    return integrate_offset([&f, a](double u) { return f(a + u); }, a, b, options);
}

QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol) {
    QuadratureOptions options;
    options.rel_tol = rel_tol;
    return integrate(f, a, b, options);
}

RootResult find_root(const ScalarFn& g, double lo, double hi, double rel_tol, int max_iter) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw DomainError("root bracket must be finite with lo <= hi");
    }
    double a = lo;
    double b = hi;
    double fa = g(a);
    double fb = g(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw NonFinite("root function is not finite at the bracket ends");
    }
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw NoBracket("g(lo) and g(hi) have the same sign");
    }

    // b is the best estimate, a the previous one, c keeps the sign change with b.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * rel_tol * std::abs(b) +
                           std::numeric_limits<double>::min();
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            return {b, fb, iter};
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double r = fb / fc;
                const double t = fa / fc;
                p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        b = std::clamp(b, lo, hi);
        fb = g(b);
        if (!std::isfinite(fb)) {
            throw NonFinite("root function is not finite at " + std::to_string(b));
        }
    }
    throw NonConvergence("root finder did not converge in " + std::to_string(max_iter) + " iterations");
}

}  // namespace feelab::numerics
