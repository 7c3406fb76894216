#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pdm/dynamics.hpp"
#include "pdm/errors.hpp"
#include "pdm/solutions.hpp"
#include "support.hpp"

using namespace pdm;

// Frozen from tests/oracles/oracles.py.
constexpr double kPeriodPlus = 6.5898603448626419;    // 2π√1.1
constexpr double kPeriodMinus = 5.9607529594776607;   // 2π√0.9
constexpr double kLsodaReturnPlus = 0.99999999977624765;
constexpr double kLsodaReturnMinus = 0.99999999981526289;
constexpr double kMl1Energy = 0.45454545454545455;

namespace {

constexpr double kPi = std::numbers::pi;

ModelFamily ml1(int sign, double lambda) { return normalized({.family = Family::ml1, .sign = sign, .lambda = lambda}); }

Trajectory run(const ModelFamily& fam, double x0, double v0, double t_end, double dt = 0.01) {
    IntegratorOptions io;
    io.sample_dt = dt;
    return integrate_pdm(build_model(fam), catalog_map(fam), {x0, v0}, t_end, io);
}

}  // namespace

TEST_CASE("uniform grid includes both ends") {
    const auto g = uniform_grid(0.0, 1.0, 0.3);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(uniform_grid(0.0, 1.0, 0.25).size() == 5);
    CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 0.1), InvalidParameter);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0.0), InvalidParameter);
}

TEST_CASE("harmonic oscillator returns after one period") {
    const auto traj = run(ml1(+1, 0.0), 1.0, 0.0, 2 * kPi);
    CHECK(traj.samples.back().t == 2 * kPi);
    CHECK(std::abs(traj.samples.back().x - 1.0) <= 1e-8);
    CHECK(std::abs(traj.samples.back().xdot) <= 1e-8);
}

TEST_CASE("ML-I returns after its closed-form period") {
    auto plus = run(ml1(+1, 0.1), 1.0, 0.0, 2 * kPi * std::sqrt(1.1));
    CHECK(std::abs(plus.samples.back().x - 1.0) <= 1e-6);
    CHECK(std::abs(plus.samples.back().x - kLsodaReturnPlus) <= 1e-8);

    auto minus = run(ml1(-1, 0.1), 1.0, 0.0, 2 * kPi * std::sqrt(0.9));
    CHECK(std::abs(minus.samples.back().x - 1.0) <= 1e-6);
    CHECK(std::abs(minus.samples.back().x - kLsodaReturnMinus) <= 1e-8);
}

TEST_CASE("equilibrium is a fixed point") {
    const auto traj = run(ml1(+1, 0.1), 0.0, 0.0, 20.0);
    for (const auto& s : traj.samples) {
        CHECK(s.x == 0.0);
        CHECK(s.energy == 0.0);
        CHECK(s.q == 0.0);
    }
}

TEST_CASE("trajectory columns are consistent") {
    const auto fam = ml1(-1, 0.2);
    const auto sys = build_model(fam);
    const auto map = catalog_map(fam);
    const auto traj = run(fam, 0.8, 0.1, 10.0, 0.05);
    CHECK(traj.meta.accepted_steps > 0);
    CHECK(traj.meta.rtol == 1e-10);
    for (const auto& s : traj.samples) {
        CHECK(s.q == doctest::Approx(map.q(s.x)).epsilon(1e-15));
        CHECK(s.qdot_tau == doctest::Approx(s.xdot * std::sqrt(sys.mass(s.x))).epsilon(1e-14));
        CHECK(s.energy == doctest::Approx(energy(sys, s.x, s.xdot)).epsilon(1e-14));
        CHECK(std::abs(s.residual) <= 1e-6);
    }
    // τ = ∫ f dt with f = m > 0 is increasing.
    for (std::size_t i = 1; i < traj.samples.size(); ++i) CHECK(traj.samples[i].tau > traj.samples[i - 1].tau);
}

TEST_CASE("sampling at explicit times") {
    const auto fam = ml1(+1, 0.1);
    const std::vector<double> ts{0.0, 0.5, 3.0, kPeriodPlus};
    const auto traj = integrate_pdm(build_model(fam), catalog_map(fam), {1.0, 0.0}, ts);
    REQUIRE(traj.samples.size() == 4);
    const ClosedFormSolution sol(fam);
    for (const auto& s : traj.samples) CHECK(std::abs(s.x - sol.evaluate(s.t).x) <= 1e-8);
    const std::vector<double> bad{0.0, 2.0, 1.0};
    CHECK_THROWS_AS(integrate_pdm(build_model(fam), catalog_map(fam), {1.0, 0.0}, bad), InvalidParameter);
}

TEST_CASE("escaping trajectories raise a typed error") {
    // Inverted oscillator on (−2, 2): x grows like sinh until it meets the edge.
    const Interval dom{-2.0, 2.0};
    const PdmSystem sys{DifferentiableFn::constant(1.0, dom),
                        {[](double x) { return -x * x; }, [](double x) { return -2 * x; }, dom},
                        dom,
                        0.0};
    const NonlocalMap map{sys.mass, DifferentiableFn::constant(1.0, dom), DifferentiableFn::constant(1.0, dom),
                          {[](double x) { return x; }, [](double) { return 1.0; }, dom}, dom, true};
    try {
        integrate_pdm(sys, map, {1.0, 1.0}, 5.0);
        FAIL("expected DomainEscape");
    } catch (const DomainEscape& e) {
        CHECK(e.kind() == "domain_escape");
        CHECK(e.time() > 0.4);
        CHECK(e.time() < 0.7);
    }
    CHECK_THROWS_AS(integrate_pdm(sys, map, {3.0, 0.0}, 1.0), DomainViolation);
}

TEST_CASE("reference integration") {
    IntegratorOptions io;
    io.sample_dt = 0.01;
    const auto harm = reference_potential(ml1(+1, 0.0));
    const auto ref = integrate_reference(harm, 1.0, 0.0, 20.0, io);
    for (const auto& s : ref.samples) CHECK(std::abs(s.q - std::cos(s.tau)) <= 1e-8);

    const auto iso = normalized({.family = Family::isotonic, .omega = 1.0, .beta = 0.1});
    const auto ep = reference_potential(iso);
    const auto traj = integrate_reference(ep, 1.0, 0.0, 20.0, io);
    const auto exact = ReferenceSolution::from_state(iso, 1.0, 0.0);
    for (const auto& s : traj.samples) CHECK(std::abs(s.q - exact.q(s.tau)) <= 1e-6);

    // Circular orbit q⁴ = 2β/ω².
    const double q_star = std::pow(0.2, 0.25);
    const auto fixed = integrate_reference(ep, q_star, 0.0, 20.0, io);
    for (const auto& s : fixed.samples) CHECK(std::abs(s.q - q_star) <= 1e-10);

    CHECK_THROWS_AS(integrate_reference(ep, -1.0, 0.0, 1.0, io), DomainViolation);
}

TEST_CASE("energy") {
    const auto sys = build_model(ml1(+1, 0.1));
    CHECK(std::abs(energy(sys, 1.0, 0.0) - kMl1Energy) <= 1e-15);
    CHECK(energy(sys, 0.0, 0.0) == 0.0);
    CHECK(energy(build_model(ml1(+1, 0.0)), 1.0, 1.0) == 1.0);
}

TEST_CASE("period estimation") {
    const auto sho = run(ml1(+1, 0.0), 1.0, 0.0, 10 * 2 * kPi, 2 * kPi / 2000);
    CHECK(std::abs(estimate_period(sho) - 2 * kPi) <= 1e-6);

    const auto plus = run(ml1(+1, 0.1), 1.0, 0.0, 10 * kPeriodPlus, kPeriodPlus / 2000);
    CHECK(std::abs(estimate_period(plus) - kPeriodPlus) <= 1e-5 * kPeriodPlus);
    const auto minus = run(ml1(-1, 0.1), 1.0, 0.0, 10 * kPeriodMinus, kPeriodMinus / 2000);
    CHECK(std::abs(estimate_period(minus) - kPeriodMinus) <= 1e-5 * kPeriodMinus);

    const auto short_run = run(ml1(+1, 0.1), 1.0, 0.0, 3.0);
    CHECK_THROWS_AS(estimate_period(short_run), InsufficientCycles);

    // Synthetic signal with an offset.
    std::vector<double> t, y;
    for (int i = 0; i <= 5000; ++i) {
        t.push_back(i * 0.01);
        y.push_back(3.0 + std::sin(2 * kPi * t.back() / 7.0));
    }
    CHECK(estimate_period(t, y) == doctest::Approx(7.0).epsilon(1e-6));
}

TEST_CASE("energy is conserved to 1e-8 over ten periods for every family") {
    for (const auto& fam : test::catalog()) {
        CAPTURE(to_string(fam.family));
        CAPTURE(fam.sign);
        const ClosedFormSolution sol(fam);
        const auto k = sol.evaluate(0.0);
        const auto traj = run(fam, k.x, k.xdot, 10 * sol.period(), sol.period() / 500);
        CHECK(max_energy_drift(traj) <= 1e-8);
    }
}

TEST_CASE("pushforward of an ML-I trajectory is harmonic") {
    for (int sign : {+1, -1}) {
        const auto fam = ml1(sign, 0.1);
        const auto traj = run(fam, 1.0, 0.0, 10 * ClosedFormSolution(fam).period());
        const auto ref = pushforward(traj, catalog_map(fam));
        REQUIRE(ref.samples.size() == traj.samples.size());
        const auto fit = fit_harmonic(ref, 1.0);
        CHECK(fit.rms <= 1e-5);
        CHECK(std::abs(fit.amplitude - 1.0 / std::sqrt(1.0 + sign * 0.1)) <= 1e-5);
        CHECK(std::abs(fit.phase) <= 1e-5);
    }
}

TEST_CASE("pushforward special cases") {
    const auto sho = ml1(+1, 0.0);
    const auto traj = run(sho, 0.7, 0.3, 5.0);
    const auto ref = pushforward(traj, catalog_map(sho));
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
        CHECK(ref.samples[i].tau == doctest::Approx(traj.samples[i].t).epsilon(1e-12));
        CHECK(ref.samples[i].q == traj.samples[i].x);
        CHECK(ref.samples[i].qdot == traj.samples[i].xdot);
    }

    const auto rest = pushforward(run(ml1(+1, 0.1), 0.0, 0.0, 5.0), catalog_map(ml1(+1, 0.1)));
    for (const auto& s : rest.samples) CHECK(s.q == 0.0);

    // τ of ML-II reverses where f = βm'/2m changes sign.
    const auto ml2 = normalized({.family = Family::ml2, .lambda = 0.1});
    CHECK_THROWS_AS(pushforward(run(ml2, 1.0, 0.0, 10.0), catalog_map(ml2)), NonMonotoneTau);
}

TEST_CASE("harmonic fit of exact data") {
    ReferenceTrajectory r;
    for (int i = 0; i < 400; ++i) {
        const double tau = 0.05 * i;
        r.samples.push_back({tau, 0.8 * std::cos(1.3 * tau + 0.4), 0.0, 0.0});
    }
    const auto fit = fit_harmonic(r, 1.3);
    CHECK(fit.amplitude == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(fit.phase == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(fit.rms <= 1e-14);
}

TEST_CASE("reference residual separates right and wrong potentials") {
    ReferenceTrajectory r;
    for (int i = 0; i < 200; ++i) {
        const double tau = 0.05 * i;
        r.samples.push_back({tau, std::cos(tau), -std::sin(tau), 0.0});
    }
    const auto good = reference_equation_residual(r, reference_potential(ml1(+1, 0.0)));
    CHECK(good.within_bound);
    CHECK(good.max_residual <= 1e-3);
    const auto wrong = reference_equation_residual(
        r, reference_potential(normalized({.family = Family::ml1, .omega = 1.2, .lambda = 0.0})));
    CHECK_FALSE(wrong.within_bound);
}

TEST_CASE("CSV output is fixed-format and deterministic") {
    const auto fam = ml1(+1, 0.1);
    std::ostringstream a, b;
    write_trajectory_csv(a, run(fam, 1.0, 0.0, 2.0, 0.5));
    write_trajectory_csv(b, run(fam, 1.0, 0.0, 2.0, 0.5));
    CHECK(a.str() == b.str());
    std::istringstream in(a.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "t,x,xdot,tau,q,qdot_tau,energy,residual");
    CHECK(first.rfind("0,1,0,0,0.95346258924559", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 4);
}
