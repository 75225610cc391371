#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "feelab/analysis.hpp"
#include "feelab/errors.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace feelab;
using feelab::test::rel_err;
using feelab::test::Rng;

namespace {

const PoolState kPool(100.0, 100.0);

EngineConfig config(EngineMode mode, FeeRule rule, SplitMode split = SplitMode::balanced) {
    EngineConfig c;
    c.mode = mode;
    c.fee_rule = std::move(rule);
    c.split_mode = split;
    return c;
}

}  // namespace

TEST_CASE("impermanent loss examples") {
    const auto none = impermanent_loss(kPool, unchanged_outcome(kPool));
    CHECK(none.il_abs == 0.0);

    const auto free = impermanent_loss(kPool, swap_continuous(kPool, ConstantFee(0.0), 10.0));
    CHECK(free.price == doctest::Approx(0.82644628099173554).epsilon(1e-14));
    CHECK(free.v_hold == doctest::Approx(182.64462809917355).epsilon(1e-14));
    CHECK(free.v_pool == doctest::Approx(181.81818181818182).epsilon(1e-14));
    CHECK(std::abs(free.il_abs - -0.82644628099173554) <= 1e-12);

    const auto zero = impermanent_loss(kPool, swap_continuous(kPool, ZeroILFee(1e4), 10.0));
    CHECK(std::abs(zero.il_abs) <= 1e-9 * zero.v_hold);
}

TEST_CASE("no-fee impermanent loss matches its closed form") {
    Rng rng(51);
    for (int i = 0; i < feelab::test::kPropertyCases; ++i) {
        const PoolState pool(rng.log_uniform(1, 1e6), rng.log_uniform(1, 1e6));
        const double dx = pool.x() * rng.uniform(0.001, 5.0);
        const auto out = swap_continuous(pool, ConstantFee(0.0), dx);
        const auto il = impermanent_loss(pool, out);
        const double k0 = invariant(pool);
        const double x_f = pool.x() + dx;
        const double expected = -k0 * dx * dx / (pool.x() * x_f * x_f);
        CHECK(rel_err(il.il_abs, expected) <= 1e-10);
        CHECK(il.il_rel > -1.0);
    }
}

TEST_CASE("zero-IL fee keeps impermanent loss at zero for every trade size") {
    std::vector<double> alphas;
    for (int i = 0; i <= 200; ++i) alphas.push_back(i / 200.0);
    alphas.insert(alphas.end(), {2.0, 5.0, 10.0});
    for (const double a : alphas) {
        const auto out = swap_continuous(kPool, ZeroILFee(1e4), a * 100.0);
        const auto il = impermanent_loss(kPool, out);
        CHECK(std::abs(il.il_abs) <= 1e-9 * il.v_hold);
    }
}

TEST_CASE("splitting_error examples") {
    const std::vector<std::int64_t> ns{1, 2, 5, 10, 100};
    const auto cont = splitting_error(kPool, config(EngineMode::continuous, ConstantFee(0.003)), 10.0, ns);
    CHECK(cont.columns() == std::vector<std::string>{"N", "error"});
    REQUIRE(cont.rows().size() == ns.size());
    for (const double e : cont.column("error")) CHECK(e <= 1e-12);

    const auto free = splitting_error(kPool, config(EngineMode::discrete, ConstantFee(0.0)), 10.0, ns);
    for (const double e : free.column("error")) CHECK(e <= 1e-14);

    const auto v2 = splitting_error(kPool, config(EngineMode::discrete, ConstantFee(0.003), SplitMode::input_only),
                                    10.0, std::vector<std::int64_t>{2, 10});
    const auto errs = v2.column("error");
    CHECK(errs[0] > 1e-6);
    CHECK(errs[1] < 1e-4);
    // Against the atomic baseline the error grows with N toward the
    // continuous-limit gap (about 1.3e-5).
    CHECK(errs[1] > errs[0]);

    CHECK_THROWS_AS(splitting_error(kPool, config(EngineMode::discrete, ConstantFee(0.003)), 10.0,
                                    std::vector<std::int64_t>{0}),
                    DomainError);
}

TEST_CASE("relative effective price examples") {
    CHECK(relative_effective_price(kPool, config(EngineMode::continuous, ConstantFee(0.0)), 10.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(relative_effective_price(kPool, config(EngineMode::discrete, ConstantFee(0.0)), 10.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    const double v2 =
        relative_effective_price(kPool, config(EngineMode::discrete, ConstantFee(0.003), SplitMode::input_only), 10.0);
    CHECK(std::abs(v2 - 0.99727198326816404) <= 1e-12);
    CHECK_THROWS_AS(relative_effective_price(kPool, config(EngineMode::continuous, ConstantFee(0.003)), 0.0),
                    DomainError);
}

TEST_CASE("relative effective price falls as the fee grows") {
    for (const auto mode : {EngineMode::continuous, EngineMode::discrete}) {
        double prev = 1.0;
        for (int i = 0; i <= 50; ++i) {
            const double p = relative_effective_price(kPool, config(mode, ConstantFee(0.002 * i)), 10.0);
            CHECK(p <= prev * (1.0 + 4e-16));
            CHECK(p > 0.0);
            prev = p;
        }
    }
}

TEST_CASE("relative price and IL curves") {
    const auto alphas = alpha_grid(0.1, 10);
    const std::vector<Design> designs{{"a", config(EngineMode::continuous, ConstantFee(0.0))},
                                      {"b", config(EngineMode::continuous, ConstantFee(0.003))}};
    const auto t = relative_price_curve(kPool, designs, alphas);
    CHECK(t.columns() == std::vector<std::string>{"alpha", "a", "b"});
    CHECK(t.rows().size() == 10);
    for (const double v : t.column("a")) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const auto il = impermanent_loss_curve(kPool, config(EngineMode::continuous, ZeroILFee(1e4)), alphas);
    for (const double v : il.column("il_rel")) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("fee_field_grid examples") {
    const auto c = fee_field_grid(ConstantFee(0.003), {50, 200, 7}, {50, 200, 5});
    CHECK(c.rows().size() == 35);
    CHECK(c.columns() == std::vector<std::string>{"x", "y", "alpha", "k"});
    for (const double a : c.column("alpha")) CHECK(a == 0.003);

    // 50..200 in steps of 25 contains (50, 200) and (200, 50); all products are exact.
    const auto lin = fee_field_grid(LinearFee(0.003, 1e4), {50, 200, 7}, {50, 200, 7});
    const auto pr = fee_field_grid(PriceRatioFee(0.003), {50, 200, 7}, {50, 200, 7});
    const auto ks = lin.column("k");
    const auto la = lin.column("alpha");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        for (std::size_t j = 0; j < ks.size(); ++j) {
            if (ks[i] == ks[j]) CHECK(std::abs(la[i] - la[j]) <= 1e-14);
        }
    }
    double a_50_200 = 0.0;
    double a_200_50 = 0.0;
    for (const auto& row : pr.rows()) {
        if (row[0] == 50 && row[1] == 200) a_50_200 = row[2];
        if (row[0] == 200 && row[1] == 50) a_200_50 = row[2];
    }
    CHECK(a_50_200 == doctest::Approx(0.012).epsilon(1e-15));
    CHECK(a_200_50 == doctest::Approx(0.00075).epsilon(1e-15));
    CHECK(a_50_200 / a_200_50 == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(pr.meta().back().second == "false");

    CHECK_THROWS_AS(fee_field_grid(ConstantFee(0.003), {0, 200, 7}, {50, 200, 7}), DomainError);
    CHECK_THROWS_AS(fee_field_grid(ConstantFee(0.003), {50, 200, 1}, {50, 200, 7}), DomainError);
    CHECK_THROWS_AS(fee_field_grid(ZeroILFee(1e4), {50, 200, 7}, {50, 200, 7}), DomainError);
}

TEST_CASE("fee field is backend independent") {
    for (const auto& rule : {FeeRule(LinearFee(0.003, 1e4)), FeeRule(PriceRatioFee(0.003)), FeeRule(ZeroILFee(100))}) {
        const auto a = fee_field_grid(rule, {10, 300, 33}, {10, 300, 29}, kernels::Backend::scalar);
        const auto b = fee_field_grid(rule, {10, 300, 33}, {10, 300, 29}, kernels::best_backend());
        CHECK(a.rows() == b.rows());
    }
}

TEST_CASE("zero_il_fee_curve examples") {
    const std::vector<double> ts{1.0, 1.0 + 1e-6, 1.21 / 1.2, 1.5, 3.0};
    const auto t = zero_il_fee_curve(1e4, ts);
    const auto phi = t.column("phi");
    CHECK(phi[0] == 0.0);
    CHECK(phi[1] == doctest::Approx(2e-3).epsilon(0.02));
    CHECK(phi[2] == doctest::Approx(0.1666667).epsilon(1e-5));
    for (std::size_t i = 1; i < phi.size(); ++i) CHECK(phi[i] >= phi[i - 1]);
    CHECK_THROWS_AS(zero_il_fee_curve(1e4, std::vector<double>{1.0, 0.9}), DomainError);
}

TEST_CASE("universal_fee_conflict examples") {
    const auto c = universal_fee_conflict(10100, 10000, 9000);
    CHECK(c.a.alpha == doctest::Approx(0.110499).epsilon(1e-5));
    CHECK(c.a.phi == doctest::Approx(0.18099751242241781).epsilon(1e-12));
    CHECK(c.b.alpha == doctest::Approx(0.492574).epsilon(1e-5));
    CHECK(c.b.phi == doctest::Approx(0.49625925833328703).epsilon(1e-12));
    CHECK(c.conflicting());

    const auto same = universal_fee_conflict(10100, 10000, 10000);
    CHECK(same.a.phi == same.b.phi);
    CHECK_FALSE(same.conflicting());

    CHECK_THROWS_AS(universal_fee_conflict(10100, 10100, 9000), DomainError);
    CHECK_THROWS_AS(universal_fee_conflict(10100, 10000, 0), DomainError);
}

TEST_CASE("required fee falls as the reference invariant rises") {
    const double k_star = 10100;
    double prev = 2.0;
    for (const double f : uniform_grid(0.5, 0.99, 200)) {
        const double phi = zero_il_required_fee(k_star, f * k_star).phi;
        CHECK(phi < prev);
        prev = phi;
    }
}

TEST_CASE("zero-IL crossover against a constant fee") {
    const double t = zero_il_crossover(0.003);
    CHECK(t == doctest::Approx(1.0000022567703109).epsilon(1e-15));
    CHECK(eval_phi(ZeroILFee(1.0), t) == doctest::Approx(0.003).epsilon(1e-8));
    CHECK(zero_il_crossover(0.0) == 1.0);
}

TEST_CASE("grids") {
    const auto a = alpha_grid(0.5, 5);
    CHECK(a == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
    const auto u = uniform_grid(1.0, 2.0, 3);
    CHECK(u == std::vector<double>{1.0, 1.5, 2.0});
    CHECK_THROWS_AS(alpha_grid(0.0, 5), DomainError);
    CHECK_THROWS_AS(uniform_grid(2.0, 1.0, 3), DomainError);
}

TEST_CASE("series table validation") {
    SeriesTable t("demo", {"a", "b"});
    CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
    CHECK_THROWS_AS(t.add_row({1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(t.column("c"), DomainError);
    CHECK_THROWS_AS(SeriesTable("empty", {}), DomainError);
    t.set_meta("k", "1");
    t.set_meta("k", "2");
    CHECK(t.meta().size() == 1);
    CHECK(t.meta()[0].second == "2");
}

TEST_CASE("CSV uses 17 significant digits") {
    SeriesTable t("demo", {"x", "y"});
    t.add_row({0.1, 1.0 / 3.0});
    t.add_row({1e-20, 12345});
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str() == "x,y\n0.10000000000000001,0.33333333333333331\n9.9999999999999995e-21,12345\n");
}

TEST_CASE("JSON and CSV carry the same numbers") {
    const auto t = splitting_error(kPool, config(EngineMode::discrete, ConstantFee(0.003), SplitMode::input_only),
                                   10.0, std::vector<std::int64_t>{1, 3, 7});
    std::ostringstream js;
    write_json(t, js);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["name"] == "splitting_error");
    CHECK(doc["columns"] == nlohmann::json({"N", "error"}));
    CHECK(doc["meta"]["fee"] == "constant:0.003");

    std::ostringstream cs;
    write_csv(t, cs);
    std::istringstream lines(cs.str());
    std::string line;
    std::getline(lines, line);
    std::size_t r = 0;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(cells, cell, ',')) {
            CHECK(std::stod(cell) == doc["rows"][r][c].get<double>());
            ++c;
        }
        ++r;
    }
    CHECK(r == 3);
}
