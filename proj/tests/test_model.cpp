#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracrd/model.hpp"
#include "fracrd/rng.hpp"

using namespace fracrd;

TEST_CASE("reaction vanishes at the origin") {
    const auto model = preset_model();
    const auto f = eval_reaction(model, {0.0, 0.0});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
}

TEST_CASE("reaction hand evaluations on the preset") {
    const auto model = preset_model();
    // f_1(1,1) = 1*1 - 1^2 = 0, symmetric
    auto f = eval_reaction(model, {1.0, 1.0});
    CHECK(f[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(0.0).epsilon(1e-15));
    // f(0,1): f_1 = K_12*1 = 1, f_2 = 0 + 0 - 1*1^2 = -1
    f = eval_reaction(model, {0.0, 1.0});
    CHECK(f[0] == doctest::Approx(1.0));
    CHECK(f[1] == doctest::Approx(-1.0));
}

TEST_CASE("reaction rejects negative input") {
    const auto model = preset_model();
    CHECK_THROWS_AS(eval_reaction(model, {-0.1, 0.5}), std::domain_error);
    CHECK_NOTHROW(eval_reaction_extended(model, {-0.1, 0.5}));
}

TEST_CASE("jacobian at zero") {
    SUBCASE("preset: saturation derivative vanishes at 0") {
        const auto jac = jacobian_at_zero(preset_model());
        CHECK(jac[0][0] == 0.0);
        CHECK(jac[0][1] == 1.0);
        CHECK(jac[1][0] == 1.0);
        CHECK(jac[1][1] == 0.0);
    }
    SUBCASE("scalar case") {
        ModelSpec model({0.5}, {{0.0}}, {2.0}, {1.0}, 1.0, 2.0);
        const auto jac = jacobian_at_zero(model);
        CHECK(jac[0][0] == 2.0);
    }
    SUBCASE("K + diag(r)") {
        ModelSpec model({1.0, 0.5}, {{0.0, 2.0}, {3.0, 0.0}}, {1.0, -1.0}, {2.0, 2.0}, 1.0, 2.0);
        const auto jac = jacobian_at_zero(model);
        CHECK(jac[0][0] == 1.0);
        CHECK(jac[0][1] == 2.0);
        CHECK(jac[1][0] == 3.0);
        CHECK(jac[1][1] == -1.0);
    }
}

TEST_CASE("constructor-level invariant rejections") {
    // Lambda <= 1
    CHECK_THROWS_AS(ModelSpec({1.0, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 1.0, 0.5),
                    std::invalid_argument);
    // min alpha must be < 1
    CHECK_THROWS_AS(ModelSpec({1.0, 1.0}, {{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 1.0, 2.0),
                    std::invalid_argument);
    // alpha not nonincreasing
    CHECK_THROWS_AS(ModelSpec({0.5, 1.0}, {{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 1.0, 2.0),
                    std::invalid_argument);
    // cooperativity: off-diagonal K must be positive
    CHECK_THROWS_AS(ModelSpec({1.0, 0.5}, {{0.0, 0.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 1.0, 2.0),
                    std::invalid_argument);
    // corner condition violated: r too large
    CHECK_THROWS_AS(ModelSpec({1.0, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, {5.0, 0.0}, {1.0, 1.0}, 1.0, 2.0),
                    std::invalid_argument);
    // delta below the technical threshold 2/(d+2a) = 1
    CHECK_THROWS_AS(ModelSpec({1.0, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 0.5, 2.0),
                    std::invalid_argument);
}

TEST_CASE("validate_hypotheses on the preset passes with lambda1 = 1") {
    const auto model = preset_model();
    const auto report = validate_hypotheses(model, 200, 42);
    CHECK(report.h1_lambda1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(report.pass_h1);
    CHECK(report.pass_h2);
    CHECK(report.pass_h3);
    CHECK(report.pass_h4);
    CHECK(report.pass_h5);
    CHECK(report.pass_cooperative);
    CHECK(report.all_pass());
    // corner value F(Lambda*1) = Lambda*(sum K + r - q Lambda^delta) = 2*(-1)
    CHECK(report.h2_corner_values[0] == doctest::Approx(-2.0));
    CHECK(report.h2_corner_values[1] == doctest::Approx(-2.0));
    // l = max row sum of |DF| over the box = (1+delta) q Lambda^delta + K = 5
    CHECK(report.lipschitz_estimate == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("H1 fails for a damped system") {
    // DF(0) = [[-3,1],[1,-3]], eigenvalues -2 and -4
    ModelSpec model({1.0, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, {-3.0, -3.0}, {1.0, 1.0}, 1.0, 2.0);
    const auto report = validate_hypotheses(model, 100, 7);
    CHECK(report.h1_lambda1 == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK_FALSE(report.pass_h1);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("cooperativity: off-diagonal partials strictly positive at sampled points") {
    const auto model = preset_model();
    SplitMix64 rng(11);
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> s = {rng.uniform(0.05, 1.95), rng.uniform(0.05, 1.95)};
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t j = 1 - i;
            auto sp = s, sm = s;
            sp[j] += h;
            sm[j] -= h;
            const double d = (eval_reaction(model, sp)[i] - eval_reaction(model, sm)[i]) / (2 * h);
            CHECK(d > 0.0);
        }
    }
}

TEST_CASE("H3/H4 sandwich holds at sampled points") {
    const auto model = preset_model();
    const auto jac = jacobian_at_zero(model);
    const double c1 = model.c_delta1();
    const double c2 = model.c_delta2();
    SplitMix64 rng(13);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> s = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
        const auto f = eval_reaction(model, s);
        const double norm = std::sqrt(s[0] * s[0] + s[1] * s[1]);
        for (std::size_t i = 0; i < 2; ++i) {
            const double gap = jac[i][0] * s[0] + jac[i][1] * s[1] - f[i];
            CHECK(gap >= c1 * std::pow(s[i], 1.0 + model.delta()) - 1e-12);
            CHECK(gap <= c2 * std::pow(norm, 1.0 + model.delta()) + 1e-12);
        }
    }
}

TEST_CASE("corner is a supersolution state: F(Lambda*1) <= 0") {
    const auto model = preset_model();
    const auto f = eval_reaction(model, {2.0, 2.0});
    CHECK(f[0] <= 0.0);
    CHECK(f[1] <= 0.0);
}

TEST_CASE("finite-difference Jacobian at 0 matches jacobian_at_zero") {
    const auto model = preset_model();
    const auto jac = jacobian_at_zero(model);
    const double h = 1e-7;
    for (std::size_t j = 0; j < 2; ++j) {
        std::vector<double> sp = {0.0, 0.0};
        sp[j] = h;
        const auto fp = eval_reaction(model, sp);
        for (std::size_t i = 0; i < 2; ++i) {
            const double fd = fp[i] / h; // f(0) = 0
            const double scale = std::max(1.0, std::abs(jac[i][j]));
            CHECK(std::abs(fd - jac[i][j]) / scale < 1e-6);
        }
    }
}
