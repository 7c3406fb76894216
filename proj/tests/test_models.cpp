#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pdm/errors.hpp"
#include "pdm/model_json.hpp"
#include "pdm/models.hpp"
#include "support.hpp"

using namespace pdm;

// Frozen from tests/oracles/oracles.py (mpmath, 30 digits).
constexpr double kMl1Mass1 = 0.90909090909090909;
constexpr double kMl1Potential1 = 0.45454545454545455;
constexpr double kMl1Reaction11 = -0.082644628099173554;
constexpr double kMl1Accel = -0.48341463414634146;  // ẍ at x = 0.5, ẋ = 0.3

TEST_CASE("build_model reproduces tabulated mass and potential") {
    const auto ml1 = build_model(normalized({.family = Family::ml1, .sign = +1, .omega = 1.0, .lambda = 0.1}));
    CHECK(std::abs(ml1.mass(1.0) - kMl1Mass1) <= 1e-15);
    CHECK(std::abs(ml1.potential(1.0) - kMl1Potential1) <= 1e-15);

    const auto sho = build_model(normalized({.family = Family::ml1, .lambda = 0.0}));
    for (double x : {-3.0, -0.2, 0.0, 1.7}) {
        CHECK(sho.mass(x) == 1.0);
        CHECK(std::abs(sho.potential(x) - 0.5 * x * x) <= 1e-15);
    }

    const auto morse = build_model(normalized({.family = Family::morse, .alpha = 1.0, .eta = 0.5, .amplitude = 0.5}));
    CHECK(morse.mass(0.0) == 1.0);
    CHECK(morse.potential(0.0) == 0.0);
}

TEST_CASE("el_residual vanishes on known states") {
    const auto ml1 = build_model(normalized({.family = Family::ml1, .lambda = 0.1}));
    CHECK(el_residual(ml1, 0.0, 0.0, 0.0) == 0.0);

    const auto sho = build_model(normalized({.family = Family::ml1, .lambda = 0.0}));
    CHECK(std::abs(el_residual(sho, 1.0, 0.0, -1.0)) <= 1e-15);

    const double a = acceleration(ml1, 0.5, 0.3);
    CHECK(std::abs(a - kMl1Accel) <= 1e-14);
    CHECK(std::abs(el_residual(ml1, 0.5, 0.3, a)) <= 1e-12);
}

TEST_CASE("el_residual rejects points outside the domain") {
    const auto minus = build_model(normalized({.family = Family::ml1, .sign = -1, .lambda = 0.25}));
    CHECK_THROWS_AS(el_residual(minus, 2.5, 0.0, 0.0), DomainViolation);
    const auto iso = build_model(isotonic_with_frequency(+1, 0.1, 0.1, 1.0, 1.0));
    CHECK_THROWS_AS(el_residual(iso, -0.5, 0.0, 0.0), DomainViolation);
}

TEST_CASE("reaction force") {
    const auto sho = build_model(normalized({.family = Family::ml1, .lambda = 0.0}));
    CHECK(pdm_reaction_force(sho, 0.7, 2.0) == 0.0);
    const auto morse = build_model(normalized({.family = Family::morse, .eta = 0.5, .amplitude = 0.5}));
    CHECK(std::abs(pdm_reaction_force(morse, 0.0, 1.0) - 0.5) <= 1e-15);
    const auto ml1 = build_model(normalized({.family = Family::ml1, .lambda = 0.1}));
    CHECK(std::abs(pdm_reaction_force(ml1, 1.0, 1.0) - kMl1Reaction11) <= 1e-15);
}

TEST_CASE("mass is positive and derivatives match finite differences for every family") {
    for (const auto& fam : test::catalog()) {
        CAPTURE(to_string(fam.family));
        CAPTURE(fam.sign);
        const auto sys = build_model(fam);
        for (double x : test::random_points(sys.sampling_window(), 1000)) {
            REQUIRE(sys.mass(x) > 0.0);
            const double h = 1e-5;
            for (const DifferentiableFn* fn : {&sys.mass, &sys.potential}) {
                const double fd = ((*fn)(x + h) - (*fn)(x - h)) / (2 * h);
                CHECK(std::abs(fn->derivative(x) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
            }
        }
    }
}

TEST_CASE("paired ML potentials give identical force fields") {
    for (int sign : {+1, -1}) {
        for (double lambda : {0.1, 0.25, 0.5}) {
            for (double xi : {0.0, 0.3, 1.0}) {
                const auto fam = normalized({.family = Family::shifted_ml, .sign = sign, .lambda = lambda, .xi = xi});
                const auto pair = paired_potentials(fam);
                REQUIRE(pair.size() == 2);
                const auto sys = build_model(fam);
                for (double x : test::random_points(sys.sampling_window(), 1000, 11)) {
                    const double a = pair[0].potential.derivative(x) / pair[0].mass(x);
                    const double b = pair[1].potential.derivative(x) / pair[1].mass(x);
                    REQUIRE(std::abs(a - b) <= 1e-12);
                    // The residual depends on V only through V'.
                    CHECK(std::abs(el_residual(pair[0], x, 0.4, 0.1) - el_residual(pair[1], x, 0.4, 0.1)) <= 1e-12);
                }
            }
        }
    }
    CHECK_THROWS_AS(paired_potentials(normalized({.family = Family::morse, .amplitude = 0.5})), InvalidParameter);
    CHECK_THROWS_AS(paired_potentials(normalized({.family = Family::ml1, .lambda = 0.0})), InvalidParameter);
}

TEST_CASE("ML-I and ML-II share the mass function") {
    for (int sign : {+1, -1}) {
        const auto a = build_model(normalized({.family = Family::ml1, .sign = sign, .lambda = 0.2}));
        const auto b = build_model(normalized({.family = Family::ml2, .sign = sign, .lambda = 0.2}));
        for (double x : test::random_points(a.sampling_window(), 200)) CHECK(a.mass(x) == b.mass(x));
    }
}

TEST_CASE("shifted family with zero shift equals ML-I pointwise") {
    for (int sign : {+1, -1}) {
        const auto ml = build_model(normalized({.family = Family::ml1, .sign = sign, .lambda = 0.3}));
        const auto sh = build_model(normalized({.family = Family::shifted_ml, .sign = sign, .lambda = 0.3, .xi = 0.0}));
        for (double x : test::random_points(ml.sampling_window(), 1000)) {
            CHECK(ml.mass(x) == doctest::Approx(sh.mass(x)).epsilon(1e-15));
            CHECK(ml.potential(x) == doctest::Approx(sh.potential(x)).epsilon(1e-15));
            CHECK(el_residual(ml, x, 0.2, -0.1) == doctest::Approx(el_residual(sh, x, 0.2, -0.1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(normalized({.family = Family::ml1, .lambda = -0.1}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::ml1, .sign = 0}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::ml1, .omega = 0.0}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::ml1, .sign = -1, .lambda = 1.0, .amplitude = 1.0}), InvalidAmplitude);
    CHECK_THROWS_AS(normalized({.family = Family::ml2, .lambda = 0.0}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::ml2, .lambda = 0.1, .beta = 1.0}), InvalidParameter);
    CHECK_NOTHROW(normalized({.family = Family::ml2, .lambda = 0.1, .beta = -std::sqrt(10.0)}));
    CHECK_THROWS_AS(normalized({.family = Family::quadratic, .lambda = 0.0}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::quadratic, .lambda = 0.5, .amplitude = 2.0}), InvalidAmplitude);
    CHECK_THROWS_AS(normalized({.family = Family::quadratic, .omega = 1.0, .lambda = 0.5, .alpha = 2.0}),
                    InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::morse, .amplitude = 1.0}), InvalidAmplitude);
    CHECK_THROWS_AS(normalized({.family = Family::morse, .eta = 0.0, .amplitude = 0.5}), InvalidParameter);
    CHECK_THROWS_AS(normalized({.family = Family::isotonic, .lambda = 0.1}), InvalidParameter);
    // Ω² = ω²/(1+λA²) − 2λβ/A² < 0 on the plus branch.
    CHECK_THROWS_AS(normalized({.family = Family::isotonic, .omega = 0.1, .lambda = 1.0, .beta = 1.0}),
                    InvalidAmplitude);

    const auto q = normalized({.family = Family::quadratic, .omega = 1.5, .lambda = 0.2});
    CHECK(q.a() == 1.5);
    const auto m = normalized({.family = Family::morse, .alpha = 1.0, .eta = 0.5, .amplitude = 0.5});
    CHECK(m.w() == doctest::Approx(2.0));
    const auto ml2 = normalized({.family = Family::ml2, .lambda = 0.1});
    CHECK(ml2.b() == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
}

TEST_CASE("family names") {
    for (auto f : all_families()) CHECK(family_from_string(to_string(f)) == f);
    CHECK(family_from_string("sho") == Family::ml1);
    CHECK_THROWS_AS(family_from_string("duffing"), InvalidParameter);
}

TEST_CASE("model JSON parsing and rejection") {
    const auto f = model_from_json_text(R"({"family":"ml1","sign":"-","lambda":0.1,"omega":2,"A":0.5})");
    CHECK(f.family == Family::ml1);
    CHECK(f.sign == -1);
    CHECK(f.lambda == 0.1);
    CHECK(f.w() == 2.0);
    CHECK(f.amplitude == 0.5);
    CHECK(model_from_json_text(R"({"family":"ml1","sign":1})").sign == 1);
    CHECK(model_from_json_text(R"({"family":"ml1","sign":"minus"})").sign == -1);

    CHECK_THROWS_AS(model_from_json_text(R"({"family":"ml1","mass":2})"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text(R"({"family":"ml1","lambda":"big"})"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text(R"({"family":"ml1","sign":"x"})"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text(R"({"lambda":0.1})"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text(R"([1,2])"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text("{not json"), InvalidParameter);
    CHECK_THROWS_AS(model_from_json_text(R"({"family":"sho","lambda":0.2})"), InvalidParameter);
}

TEST_CASE("model JSON round trip over random parameter draws") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int i = 0; i < 500; ++i) {
        ModelFamily f;
        f.family = all_families()[static_cast<std::size_t>(pick(rng))];
        f.sign = pick(rng) % 2 ? 1 : -1;
        f.lambda = u(rng);
        f.xi = u(rng) - 1.0;
        f.eta = u(rng) + 0.1;
        f.amplitude = u(rng);
        f.phase = u(rng) * 3.0;
        if (pick(rng) % 2) f.omega = u(rng) + 0.1;
        if (pick(rng) % 2) f.beta = u(rng) + 0.1;
        if (pick(rng) % 2) f.alpha = u(rng) + 0.1;
        CHECK(model_from_json(model_to_json(f)) == f);
    }
}
