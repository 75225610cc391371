#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "feelab/core.hpp"

namespace feelab {

/// Phi(k) = phi everywhere.
struct ConstantFee {
    explicit ConstantFee(double phi);
    double phi;
};

/// Phi(k) = slope * k / k_ref. Evaluation fails once the factor reaches 1.
struct LinearFee {
    LinearFee(double slope, double k_ref);
    double slope;
    double k_ref;
};

/// State-aware fee that keeps the absolute impermanent loss at zero for
/// trades starting from invariant `k_ref`. Given parametrically by
///   Phi(k_ref (1+a)^2 / (1+2a)) = 2a / (1+2a),  a >= 0,
/// and undefined below k_ref.
struct ZeroILFee {
    explicit ZeroILFee(double k_ref);
    double k_ref;
};

/// alpha(x, y) = clamp(base * y / x, 0, 0.999). Varies along hyperbolas, so it
/// is path dependent; kept as a negative control.
struct PriceRatioFee {
    explicit PriceRatioFee(double base);
    double base;
};

/// Caller-supplied path-independent Phi(k). Must return values in [0, 1).
struct CustomFee {
    std::string name;
    std::function<double(double)> phi;
};

using FeeRule = std::variant<ConstantFee, LinearFee, ZeroILFee, PriceRatioFee, CustomFee>;

enum class SplitMode { input_only, balanced, output_only };

bool is_path_independent(const FeeRule& rule) noexcept;

/// Phi(k) for a path-independent rule.
/// Throws DomainError for a path-dependent rule, for k <= 0, or for a
/// ZeroILFee below its reference; RangeError when the factor is not in [0, 1).
double eval_phi(const FeeRule& rule, double k);

/// alpha(x, y) = 1 - gamma1 gamma2 for any rule, validated to lie in [0, 1).
double combined_factor(const FeeRule& rule, double x, double y);

/// Inverse of t(a) = (1+a)^2 / (1+2a) on a >= 0. Throws DomainError for t < 1.
double zero_il_alpha_of_t(double t);

/// k0 (1+a)^2 / (1+2a), the invariant that keeps IL at zero after a trade of
/// relative size a = dx / x0.
double zero_il_target_k(double k0, double alpha);

/// 2a / (1+2a)
double zero_il_phi_of_alpha(double alpha);

/// Decomposes a combined factor into input/output retention factors.
/// Throws RangeError unless alpha_combined is in [0, 1).
FeeSplit split_factor(double alpha_combined, SplitMode mode);

/// Parses `constant:PHI`, `linear:SLOPE:KREF`, `zeroil:KREF`, `priceratio:BASE`.
/// Throws DomainError on malformed input.
FeeRule parse_fee_rule(std::string_view text);

/// Canonical text form accepted by parse_fee_rule (CustomFee yields `custom:<name>`).
std::string describe(const FeeRule& rule);

SplitMode parse_split_mode(std::string_view text);
std::string_view to_string(SplitMode mode) noexcept;

}  // namespace feelab
