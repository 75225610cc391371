#include "feelab/fees.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "feelab/detail/fee_formulas.hpp"
#include "feelab/errors.hpp"

namespace feelab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Shortest text that round-trips, so `describe` output parses back exactly.
std::string fmt17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double checked_factor(double phi, const char* rule) {
    if (std::isnan(phi)) {
        throw RangeError(std::string(rule) + " fee factor is NaN");
    }
    if (phi < 0.0 || phi >= 1.0) {
        throw RangeError(std::string(rule) + " fee factor " + fmt17(phi) + " outside [0, 1)");
    }
    return phi;
}

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError(std::string(what) + " must be finite and > 0");
    }
}

}  // namespace

ConstantFee::ConstantFee(double phi_) : phi(phi_) {
    if (!std::isfinite(phi) || phi < 0.0 || phi >= 1.0) {
        throw DomainError("constant fee must lie in [0, 1)");
    }
}

LinearFee::LinearFee(double slope_, double k_ref_) : slope(slope_), k_ref(k_ref_) {
    require_positive(slope, "linear fee slope");
    require_positive(k_ref, "linear fee reference invariant");
}

ZeroILFee::ZeroILFee(double k_ref_) : k_ref(k_ref_) {
    require_positive(k_ref, "zero-IL reference invariant");
}

PriceRatioFee::PriceRatioFee(double base_) : base(base_) {
    require_positive(base, "price-ratio fee base");
}

bool is_path_independent(const FeeRule& rule) noexcept {
    return !std::holds_alternative<PriceRatioFee>(rule);
}

double eval_phi(const FeeRule& rule, double k) {
    require_positive(k, "invariant k");
    return std::visit(
        overloaded{
            [](const ConstantFee& f) { return f.phi; },
            [k](const LinearFee& f) { return checked_factor(detail::linear_phi(f.slope, f.k_ref, k), "linear"); },
            [k](const ZeroILFee& f) {
                if (k < f.k_ref) {
                    throw DomainError("zero-IL fee is undefined below its reference invariant (k=" + fmt17(k) +
                                      " < k_ref=" + fmt17(f.k_ref) + ")");
                }
                return checked_factor(detail::zero_il_phi(f.k_ref, k), "zero-IL");
            },
            [](const PriceRatioFee&) -> double {
                throw DomainError("price-ratio fee is path dependent and has no Phi(k)");
            },
            [k](const CustomFee& f) { return checked_factor(f.phi(k), "custom"); },
        },
        rule);
}

double combined_factor(const FeeRule& rule, double x, double y) {
    if (const auto* pr = std::get_if<PriceRatioFee>(&rule)) {
        require_positive(x, "reserve x");
        require_positive(y, "reserve y");
        return checked_factor(detail::price_ratio_phi(pr->base, x, y), "price-ratio");
    }
    return eval_phi(rule, x * y);
}

double zero_il_alpha_of_t(double t) {
    if (!std::isfinite(t) || t < 1.0) {
        throw DomainError("relative invariant t must be finite and >= 1, got " + fmt17(t));
    }
    return detail::zero_il_alpha_of_deviation(t - 1.0);
}

double zero_il_target_k(double k0, double alpha) {
    require_positive(k0, "reference invariant k0");
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("alpha must be finite and >= 0");
    }
    const double g = 1.0 + alpha;
    return k0 * (g * g / (1.0 + 2.0 * alpha));
}

double zero_il_phi_of_alpha(double alpha) {
    if (!(alpha >= 0.0)) {
        throw DomainError("alpha must be >= 0");
    }
    return detail::zero_il_phi_of_alpha(alpha);
}

FeeSplit split_factor(double alpha_combined, SplitMode mode) {
    if (!(alpha_combined >= 0.0 && alpha_combined < 1.0)) {
        throw RangeError("combined fee factor " + fmt17(alpha_combined) + " outside [0, 1)");
    }
    const double retained = 1.0 - alpha_combined;
    switch (mode) {
        case SplitMode::input_only: return {retained, 1.0};
        case SplitMode::output_only: return {1.0, retained};
        case SplitMode::balanced: {
            const double g = std::sqrt(retained);
            return {g, g};
        }
    }
    return {retained, 1.0};
}

FeeRule parse_fee_rule(std::string_view text) {
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const auto num = [&](std::size_t i) {
        const auto s = parts[i];
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw DomainError("bad number '" + std::string(s) + "' in fee spec '" + std::string(text) + "'");
        }
        return v;
    };
    const auto arity = [&](std::size_t n) {
        if (parts.size() != n + 1) {
            throw DomainError("fee spec '" + std::string(text) + "' expects " + std::to_string(n) + " parameter(s)");
        }
    };

    const auto kind = parts.front();
    if (kind == "constant") {
        arity(1);
        return ConstantFee(num(1));
    }
    if (kind == "linear") {
        arity(2);
        return LinearFee(num(1), num(2));
    }
    if (kind == "zeroil") {
        arity(1);
        return ZeroILFee(num(1));
    }
    if (kind == "priceratio") {
        arity(1);
        return PriceRatioFee(num(1));
    }
    throw DomainError("unknown fee kind '" + std::string(kind) +
                      "' (expected constant, linear, zeroil or priceratio)");
}

std::string describe(const FeeRule& rule) {
    return std::visit(overloaded{
                          [](const ConstantFee& f) { return "constant:" + fmt17(f.phi); },
                          [](const LinearFee& f) { return "linear:" + fmt17(f.slope) + ":" + fmt17(f.k_ref); },
                          [](const ZeroILFee& f) { return "zeroil:" + fmt17(f.k_ref); },
                          [](const PriceRatioFee& f) { return "priceratio:" + fmt17(f.base); },
                          [](const CustomFee& f) { return "custom:" + f.name; },
                      },
                      rule);
}

SplitMode parse_split_mode(std::string_view text) {
    if (text == "input_only" || text == "input") return SplitMode::input_only;
    if (text == "balanced") return SplitMode::balanced;
    if (text == "output_only" || text == "output") return SplitMode::output_only;
    throw DomainError("unknown split mode '" + std::string(text) + "' (expected input_only, balanced, output_only)");
}

std::string_view to_string(SplitMode mode) noexcept {
    switch (mode) {
        case SplitMode::input_only: return "input_only";
        case SplitMode::balanced: return "balanced";
        case SplitMode::output_only: return "output_only";
    }
    return "balanced";
}

}  // namespace feelab
