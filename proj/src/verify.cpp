#include "pdm/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pdm/dynamics.hpp"
#include "pdm/errors.hpp"
#include "pdm/solutions.hpp"
#include "pdm/transform.hpp"

namespace pdm {

bool VerifyReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

class Suite {
public:
    explicit Suite(VerifyReport& r) : report_(r) {}

    void below(std::string name, double measured, double tol, std::string detail = {}) {
        report_.checks.push_back({std::move(name), measured, tol, measured <= tol, std::move(detail)});
    }

    void failed(std::string name, const std::exception& e) {
        report_.checks.push_back({std::move(name), NAN, 0.0, false, e.what()});
    }

    void info(std::string key, double value) { report_.info.emplace_back(std::move(key), value); }

    // Runs `body`; any library error becomes a failed check named `name`.
    template <class F>
    void guarded(const std::string& name, F&& body) {
        try {
            body();
        } catch (const Error& e) {
            failed(name, e);
        }
    }

private:
    VerifyReport& report_;
};

double fd_error(const DifferentiableFn& fn, double x) {
    const double h = 1e-5;
    const double fd = (fn(x + h) - fn(x - h)) / (2 * h);
    const double d = fn.derivative(x);
    return std::abs(d - fd) / (1.0 + std::abs(d));
}

bool is_ml(Family f) { return f == Family::ml1 || f == Family::ml2 || f == Family::shifted_ml; }

}  // namespace

VerifyReport verify_family(const ModelFamily& input, const VerifyOptions& opts) {
    VerifyReport report;
    report.family = normalized(input);
    const ModelFamily& fam = report.family;
    Suite suite(report);

    const PdmSystem sys = build_model(fam);
    const NonlocalMap map = catalog_map(fam);
    const ClosedFormSolution sol(fam);
    const Interval win = sys.sampling_window();

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ux(win.lo, win.hi);
    std::vector<double> xs(1000);
    for (auto& x : xs) x = ux(rng);

    // Static properties of the model and its map.
    double min_mass = kInf, fd_worst = 0.0;
    for (double x : xs) {
        min_mass = std::min(min_mass, sys.mass(x));
        for (const DifferentiableFn* fn : {&sys.mass, &sys.potential, &map.f, &map.g, &map.q})
            fd_worst = std::max(fd_worst, fd_error(*fn, x));
    }
    report.checks.push_back({"mass_positive", min_mass, 0.0, min_mass > 0, "min m(x) over 1000 points"});
    suite.below("derivative_consistency", fd_worst, 1e-6, "max |d - FD|/(1+|d|), h=1e-5");
    suite.below("compatibility", check_compatibility(map.mass, map.f, map.g, xs), 1e-12, "g = m f^2");

    {
        std::uniform_real_distribution<double> ut(0.0, opts.periods * sol.period());
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const auto k = sol.evaluate(ut(rng));
            worst = std::max(worst, std::abs(el_residual(sys, k.x, k.xdot, k.xddot)));
        }
        suite.below("closed_form_residual", worst, 1e-10, "closed form in the equation of motion");
    }

    suite.guarded("quadrature_vs_closed_form", [&] {
        const double anchor = fam.family == Family::isotonic ? sys.equilibrium : (fam.family == Family::shifted_ml ? -fam.xi : 0.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            const double quad = q_from_quadrature(map.mass, map.f, anchor, x);
            worst = std::max(worst, std::abs(quad - (map.q(x) - map.q(anchor))));
        }
        suite.below("quadrature_vs_closed_form", worst, 1e-9);
    });

    suite.guarded("invert_round_trip", [&] {
        Interval bracket = win;
        if (!map.monotone) bracket.lo = sys.equilibrium + 0.01 * (win.hi - sys.equilibrium);
        std::uniform_real_distribution<double> ub(bracket.lo, bracket.hi);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = ub(rng);
            worst = std::max(worst, std::abs(invert_q(map, map.q(x), bracket) - x));
        }
        suite.below("invert_round_trip", worst, 1e-8, map.monotone ? "full window" : "x > equilibrium branch");
    });

    if (fam.family != Family::isotonic) {
        suite.guarded("linearization_consistency", [&] {
            // ML-II on σ = +1 maps onto q'' = +ω²q, which flips the sign of the linearization route.
            const double orientation = (fam.family == Family::ml2 && fam.sign > 0) ? -1.0 : 1.0;
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                double x = xs[static_cast<std::size_t>(i)];
                if (std::abs(map.f(x)) < 1e-3) continue;
                const auto lin = linearization_q(sys, map.f, fam.w(), x);
                worst = std::max(worst, std::abs(lin.derivative - orientation * lin.integrand) /
                                            (1.0 + std::abs(lin.integrand)));
            }
            suite.below("linearization_consistency", worst, 1e-8, "d/dx[V'/(w^2 sqrt(m) f)] vs sqrt(m) f");
        });
    }

    if (is_ml(fam.family) && fam.lambda > 0) {
        const auto pair = paired_potentials(fam);
        double worst = 0.0;
        for (double x : xs) {
            const double a = pair[0].potential.derivative(x) / pair[0].mass(x);
            const double b = pair[1].potential.derivative(x) / pair[1].mass(x);
            worst = std::max(worst, std::abs(a - b));
        }
        suite.below("paired_potentials", worst, 1e-12, "V'/m of 1/2 m w^2 (x+xi)^2 vs -sigma m w^2/2lambda");
    }

    if (is_ml(fam.family)) {
        const double A = fam.amplitude, w = fam.w();
        double expect = 0.5 * w * w * A * A / (1.0 + fam.sign * fam.lambda * A * A);
        if (fam.family == Family::ml2) expect -= fam.sign * w * w / (2.0 * fam.lambda);
        const double turning = fam.family == Family::shifted_ml ? A - fam.xi : A;
        const double e = energy(sys, turning, 0.0);
        suite.below("turning_point_energy", std::abs(e - expect), 1e-12 * (1.0 + std::abs(expect)));
        if (fam.family == Family::shifted_ml) {
            const double d = A - fam.xi;
            suite.info("energy_measured", e);
            suite.info("energy_amplitude_form", 0.5 * w * w * A * A / (1.0 + fam.sign * fam.lambda * A * A));
            const double k = 1.0 + fam.sign * fam.lambda * d * d;
            suite.info("energy_shifted_amplitude_form", k > 0 ? 0.5 * w * w * d * d / k : NAN);
        }
    }

    if (!opts.dynamics) return report;

    // Dynamics: integrate over several closed-form periods.
    IntegratorOptions io;
    io.rtol = opts.rtol;
    io.atol = opts.atol;
    io.sample_dt = sol.period() / opts.samples_per_period;
    const auto k0 = sol.evaluate(0.0);
    const InitialState ic{k0.x, k0.xdot};
    suite.info("Omega", sol.frequency());
    suite.info("period_predicted", sol.period());

    suite.guarded("integration", [&] {
        const Trajectory traj = integrate_pdm(sys, map, ic, opts.periods * sol.period(), io);
        double dev = 0.0;
        for (const auto& s : traj.samples) dev = std::max(dev, std::abs(s.x - sol.evaluate(s.t).x));
        suite.below("integrator_vs_closed_form", dev, 1e-6, "max |x_num - x_closed|");
        suite.below("energy_drift", max_energy_drift(traj), 1e-8, "max |E-E0|/(1+|E0|)");
        suite.info("energy", traj.samples.front().energy);

        const double period = estimate_period(traj);
        suite.info("period_measured", period);
        suite.below("period", std::abs(period - sol.period()) / sol.period(), 1e-5, "relative");

        if (fam.family == Family::ml2) return;  // τ reverses at x = 0; checked on a segment below

        const ReferenceTrajectory pushed = pushforward(traj, map);
        std::vector<double> taus;
        taus.reserve(pushed.samples.size());
        for (const auto& p : pushed.samples) taus.push_back(p.tau - pushed.samples.front().tau);
        const auto Vq = reference_potential(fam);
        const auto ref = integrate_reference(Vq, pushed.samples.front().q, pushed.samples.front().qdot, taus, io);
        double dq = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) dq = std::max(dq, std::abs(ref.samples[i].q - pushed.samples[i].q));
        suite.below("picture_equivalence", dq, 1e-6, "pushforward vs reference integration on the tau grid");

        const auto exact = ReferenceSolution::from_state(fam, pushed.samples.front().q, pushed.samples.front().qdot);
        double dm = 0.0;
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            const double qx = map.q(sol.evaluate(traj.samples[i].t).x);
            dm = std::max(dm, std::abs(qx - exact.q(taus[i])));
        }
        suite.below("mapping_identity", dm, 1e-6, "q(x_closed(t)) vs reference solution at tau(t)");

        // Coarse subsample so the bound is set by truncation, not by the
        // interpolation error of the dense output.
        ReferenceTrajectory coarse;
        for (std::size_t i = 0; i < pushed.samples.size(); i += 25) coarse.samples.push_back(pushed.samples[i]);
        const auto rr = reference_equation_residual(coarse, Vq, 1e-9);
        report.checks.push_back({"reference_equation_fd", rr.max_residual, rr.max_bound, rr.within_bound,
                                 "q'' + V'(q) by finite differences within truncation bound"});

        if (fam.family != Family::isotonic) {
            // q̃² + ω²q² is a first integral of the harmonic reference picture.
            const double w2 = fam.w() * fam.w();
            auto inv = [&](const ReferenceSample& p) { return p.qdot * p.qdot + w2 * p.q * p.q; };
            const double i0 = inv(pushed.samples.front());
            double di = 0.0;
            for (const auto& p : pushed.samples) di = std::max(di, std::abs(inv(p) - i0));
            suite.below("reference_first_integral", di / (1.0 + i0), 1e-8, "qdot^2 + w^2 q^2 along the pushforward");

            const auto fit = fit_harmonic(pushed, fam.w());
            double expect = fam.amplitude;
            if (fam.family == Family::ml1 || fam.family == Family::shifted_ml)
                expect /= std::sqrt(1.0 + fam.sign * fam.lambda * fam.amplitude * fam.amplitude);
            suite.below("reference_fit_rms", fit.rms, 1e-5);
            suite.below("reference_fit_amplitude", std::abs(fit.amplitude - expect), 1e-5);
        }
    });

    if (fam.family == Family::ml2 && fam.amplitude > 0) {
        suite.guarded("picture_equivalence_segment", [&] {
            // Monotone segment: turning point x = A toward x = 0, with β
            // oriented so that τ increases there.
            ModelFamily seg = fam;
            seg.beta = -fam.sign / std::sqrt(fam.lambda);
            seg.phase = 0.0;
            const NonlocalMap smap = catalog_map(seg);
            const ClosedFormSolution ssol(seg);
            const double t_end = 0.9 * 0.25 * ssol.period();
            const Trajectory traj = integrate_pdm(sys, smap, {fam.amplitude, 0.0}, t_end, io);
            const ReferenceTrajectory pushed = pushforward(traj, smap);
            std::vector<double> taus;
            for (const auto& p : pushed.samples) taus.push_back(p.tau);
            const auto Vq = reference_potential(seg);
            const auto ref = integrate_reference(Vq, pushed.samples.front().q, pushed.samples.front().qdot, taus, io);
            const auto exact = ReferenceSolution::from_state(seg, pushed.samples.front().q, pushed.samples.front().qdot);
            double dq = 0.0, dm = 0.0;
            for (std::size_t i = 0; i < taus.size(); ++i) {
                dq = std::max(dq, std::abs(ref.samples[i].q - pushed.samples[i].q));
                dm = std::max(dm, std::abs(smap.q(ssol.evaluate(traj.samples[i].t).x) - exact.q(taus[i])));
            }
            suite.below("picture_equivalence", dq, 1e-6, "monotone segment x in (0, A]");
            suite.below("mapping_identity", dm, 1e-6, "monotone segment x in (0, A]");
        });
    }
    return report;
}

}  // namespace pdm
