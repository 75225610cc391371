#include <cmath>
#include <limits>

#include "doctest.h"
#include "feelab/errors.hpp"
#include "feelab/fees.hpp"
#include "support.hpp"

using namespace feelab;
using feelab::test::rel_err;
using feelab::test::Rng;

TEST_CASE("eval_phi examples") {
    CHECK(eval_phi(ConstantFee(0.003), 12345) == 0.003);
    CHECK(eval_phi(LinearFee(0.003, 1e4), 1e4) == doctest::Approx(0.003).epsilon(1e-15));
    // alpha = 0.1 point: k = 1e4 * 1.21 / 1.2, Phi = 0.2 / 1.2
    CHECK(eval_phi(ZeroILFee(1e4), 1e4 * 1.21 / 1.2) == doctest::Approx(0.1666667).epsilon(1e-6));
    CHECK(eval_phi(ZeroILFee(1e4), 1e4) == 0.0);
}

TEST_CASE("eval_phi error paths") {
    CHECK_THROWS_AS(eval_phi(ZeroILFee(1e4), 9999.0), DomainError);
    CHECK_THROWS_AS(eval_phi(LinearFee(0.003, 1e4), 1e4 / 0.003), RangeError);
    CHECK_THROWS_AS(eval_phi(PriceRatioFee(0.003), 1e4), DomainError);
    CHECK_THROWS_AS(eval_phi(ConstantFee(0.003), 0.0), DomainError);
    CHECK_THROWS_AS(eval_phi(ConstantFee(0.003), -1.0), DomainError);
    const FeeRule bad = CustomFee{"half", [](double) { return 1.5; }};
    CHECK_THROWS_AS(eval_phi(bad, 1.0), RangeError);
}

TEST_CASE("rule constructors validate parameters") {
    CHECK_THROWS_AS(ConstantFee(1.0), DomainError);
    CHECK_THROWS_AS(ConstantFee(-0.1), DomainError);
    CHECK_THROWS_AS(LinearFee(0.0, 1e4), DomainError);
    CHECK_THROWS_AS(LinearFee(0.003, -1.0), DomainError);
    CHECK_THROWS_AS(ZeroILFee(0.0), DomainError);
    CHECK_THROWS_AS(PriceRatioFee(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("zero_il_alpha_of_t examples") {
    CHECK(zero_il_alpha_of_t(1.0) == 0.0);
    CHECK(zero_il_alpha_of_t(1.21 / 1.2) == doctest::Approx(0.1).epsilon(1e-9));
    const double a = zero_il_alpha_of_t(1.01);
    CHECK(a == doctest::Approx(0.1104987562112089).epsilon(1e-12));
    // Substitute back.
    CHECK(rel_err((1 + a) * (1 + a) / (1 + 2 * a), 1.01) < 1e-12);
    CHECK_THROWS_AS(zero_il_alpha_of_t(0.999), DomainError);
    CHECK_THROWS_AS(zero_il_alpha_of_t(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("zero_il_target_k examples and monotonicity") {
    CHECK(zero_il_target_k(1e4, 0.0) == 1e4);
    CHECK(zero_il_target_k(1e4, 0.1) == doctest::Approx(10083.333333333333).epsilon(1e-13));
    CHECK(zero_il_target_k(1e4, 1.0) == doctest::Approx(13333.333333333333).epsilon(1e-13));
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double k = zero_il_target_k(1e4, 0.01 * i);
        CHECK(k > prev);
        prev = k;
    }
    CHECK_THROWS_AS(zero_il_target_k(1e4, -0.1), DomainError);
}

TEST_CASE("split_factor examples") {
    const auto in = split_factor(0.003, SplitMode::input_only);
    CHECK(in.gamma1 == doctest::Approx(0.997).epsilon(1e-15));
    CHECK(in.gamma2 == 1.0);
    const auto none = split_factor(0.0, SplitMode::balanced);
    CHECK(none.gamma1 == 1.0);
    CHECK(none.gamma2 == 1.0);
    const auto bal = split_factor(0.1666667, SplitMode::balanced);
    CHECK(bal.gamma1 == doctest::Approx(0.9128709109).epsilon(1e-9));
    CHECK(bal.gamma2 == bal.gamma1);
    const auto outp = split_factor(0.25, SplitMode::output_only);
    CHECK(outp.gamma1 == 1.0);
    CHECK(outp.gamma2 == 0.75);
    CHECK_THROWS_AS(split_factor(1.0, SplitMode::balanced), RangeError);
    CHECK_THROWS_AS(split_factor(-0.01, SplitMode::input_only), RangeError);
}

TEST_CASE("split product equals retention") {
    Rng rng(3);
    for (int i = 0; i < feelab::test::kPropertyCases; ++i) {
        const double a = rng.uniform(0.0, 0.999);
        for (const auto mode : {SplitMode::input_only, SplitMode::balanced, SplitMode::output_only}) {
            const auto s = split_factor(a, mode);
            CHECK(rel_err(s.gamma1 * s.gamma2, 1.0 - a) <= 1e-12);
        }
    }
}

// Recovering alpha from k is ill-conditioned for tiny alpha: k carries a
// relative rounding error of ~eps, and alpha ~ sqrt(k/k0 - 1).
static double conditioning_tol(double base, double alpha) {
    const double u = alpha * alpha / (1.0 + 2.0 * alpha);
    return base + 4.0 * std::numeric_limits<double>::epsilon() / std::max(u, 1e-300);
}

TEST_CASE("alpha round trip through the target invariant") {
    Rng rng(5);
    for (int i = 0; i < feelab::test::kPropertyCases; ++i) {
        const double alpha = i < 20 ? rng.log_uniform(1e-6, 0.05) : rng.uniform(0.05, 10.0);
        const double k0 = rng.log_uniform(1.0, 1e8);
        const double back = zero_il_alpha_of_t(zero_il_target_k(k0, alpha) / k0);
        CHECK(rel_err(back, alpha) <= conditioning_tol(1e-10, alpha));
    }
    CHECK(zero_il_alpha_of_t(zero_il_target_k(1e4, 0.0) / 1e4) == 0.0);
}

TEST_CASE("zero-IL fee along its own trajectory is 2a/(1+2a)") {
    Rng rng(9);
    const double k0 = 1e4;
    const FeeRule rule = ZeroILFee(k0);
    for (int i = 0; i < feelab::test::kPropertyCases; ++i) {
        const double alpha = i < 20 ? rng.log_uniform(1e-4, 0.05) : rng.uniform(0.05, 10.0);
        const double phi = eval_phi(rule, zero_il_target_k(k0, alpha));
        CHECK(rel_err(phi, 2 * alpha / (1 + 2 * alpha)) <= conditioning_tol(1e-12, alpha));
    }
}

TEST_CASE("zero-IL small-deviation asymptotic 2 sqrt(u)") {
    const FeeRule rule = ZeroILFee(1e4);
    for (const double u : {1e-6, 5e-7, 1e-7, 1e-8, 1e-10}) {
        const double phi = eval_phi(rule, 1e4 * (1.0 + u));
        const double approx = 2.0 * std::sqrt(u);
        CHECK(std::abs(phi - approx) / approx <= 0.01);
    }
}

TEST_CASE("zero-IL crosses the 0.3% constant fee near t = 1.0000023") {
    const double a_star = 0.003 / (2.0 - 0.006);
    const double t_star = 1.0 + a_star * a_star / (1.0 + 2.0 * a_star);
    CHECK(t_star == doctest::Approx(1.0000022567703109).epsilon(1e-15));
    const FeeRule rule = ZeroILFee(1.0);
    CHECK(eval_phi(rule, 1.0 + 0.99 * (t_star - 1.0)) < 0.003);
    CHECK(eval_phi(rule, 1.0 + 1.01 * (t_star - 1.0)) > 0.003);
}

TEST_CASE("zero-IL fee approaches 1 for large invariants") {
    const FeeRule rule = ZeroILFee(1.0);
    CHECK(eval_phi(rule, 1e6) > 0.999);
    CHECK(eval_phi(rule, 1e12) < 1.0);
}

TEST_CASE("fee spec parsing") {
    const auto c = parse_fee_rule("constant:0.003");
    REQUIRE(std::holds_alternative<ConstantFee>(c));
    CHECK(std::get<ConstantFee>(c).phi == 0.003);

    const auto l = parse_fee_rule("linear:0.003:10000");
    REQUIRE(std::holds_alternative<LinearFee>(l));
    CHECK(std::get<LinearFee>(l).slope == 0.003);
    CHECK(std::get<LinearFee>(l).k_ref == 10000.0);

    CHECK(std::holds_alternative<ZeroILFee>(parse_fee_rule("zeroil:10000")));
    CHECK(std::holds_alternative<PriceRatioFee>(parse_fee_rule("priceratio:0.003")));

    for (const char* bad : {"", "constant", "constant:", "constant:abc", "constant:0.003:1", "linear:0.003",
                            "zeroil:-5", "flat:0.1", "constant:1.5", "constant:0.003x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_fee_rule(bad), DomainError);
    }
}

TEST_CASE("describe round-trips through the parser") {
    for (const char* spec : {"constant:0.003", "linear:0.003:10000", "zeroil:10000", "priceratio:0.003",
                             "constant:0.1234567890123"}) {
        CHECK(describe(parse_fee_rule(spec)) == spec);
    }
}

TEST_CASE("split mode names") {
    CHECK(parse_split_mode("input_only") == SplitMode::input_only);
    CHECK(parse_split_mode("balanced") == SplitMode::balanced);
    CHECK(parse_split_mode("output_only") == SplitMode::output_only);
    CHECK_THROWS_AS(parse_split_mode("both"), DomainError);
    CHECK(to_string(SplitMode::balanced) == "balanced");
}
