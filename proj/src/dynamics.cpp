#include "pdm/dynamics.hpp"

#include <array>
#include <cmath>
#include <ios>
#include <ostream>

#include "pdm/errors.hpp"
#include "pdm/ode.hpp"

namespace pdm {

namespace {

ode::Options to_ode(const IntegratorOptions& o) {
    ode::Options out;
    out.rtol = o.rtol;
    out.atol = o.atol;
    out.h_init = o.h_init;
    out.max_steps = o.max_steps;
    return out;
}

TrajectoryMeta make_meta(const IntegratorOptions& o, const ode::Stats& s) {
    TrajectoryMeta m;
    m.rtol = o.rtol;
    m.atol = o.atol;
    m.accepted_steps = s.accepted;
    m.rejected_steps = s.rejected;
    m.rhs_evaluations = s.rhs_evaluations;
    return m;
}

void check_times(std::span<const double> times, double t0) {
    if (times.empty()) throw InvalidParameter("sample grid is empty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || (i > 0 && !(times[i] > times[i - 1])))
            throw InvalidParameter("sample times must be strictly increasing and >= t0");
    }
}

}  // namespace

std::vector<double> uniform_grid(double t0, double t_end, double dt) {
    if (!(t_end > t0)) throw InvalidParameter("t_end must exceed t0");
    if (!(dt > 0)) throw InvalidParameter("sample spacing must be > 0");
    const auto n = static_cast<long>(std::floor((t_end - t0) / dt * (1 + 1e-12)));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 2);
    for (long i = 0; i <= n; ++i) out.push_back(t0 + static_cast<double>(i) * dt);
    if (t_end - out.back() > 1e-9 * dt)
        out.push_back(t_end);
    else
        out.back() = t_end;
    return out;
}

double energy(const PdmSystem& sys, double x, double xdot) {
    if (!sys.contains(x)) throw DomainViolation("energy: x outside model domain");
    return 0.5 * sys.mass(x) * xdot * xdot + sys.potential(x);
}

Trajectory integrate_pdm(const PdmSystem& sys, const NonlocalMap& map, const InitialState& ic,
                         double t_end, const IntegratorOptions& opts) {
    const auto grid = uniform_grid(ic.t0, t_end, opts.sample_dt);
    return integrate_pdm(sys, map, ic, grid, opts);
}

Trajectory integrate_pdm(const PdmSystem& sys, const NonlocalMap& map, const InitialState& ic,
                         std::span<const double> times, const IntegratorOptions& opts) {
    if (!sys.contains(ic.x0)) throw DomainViolation("initial position outside model domain");
    check_times(times, ic.t0);
    const double t_end = times.back();

    using State = std::array<double, 3>;  // x, ẋ, τ
    auto rhs = [&](double, const State& y, State& dy) {
        const double m = sys.mass(y[0]);
        dy[0] = y[1];
        dy[1] = -0.5 * sys.mass.derivative(y[0]) / m * y[1] * y[1] - sys.potential.derivative(y[0]) / m;
        dy[2] = map.f(y[0]);
    };
    auto valid = [&](const State& y) { return sys.contains(y[0]) && std::isfinite(y[1]); };

    Trajectory traj;
    traj.samples.reserve(times.size());
    auto sample = [&](double t, const State& y, const State& dy) {
        const double x = y[0], v = y[1];
        const double m = sys.mass(x);
        traj.samples.push_back({t, x, v, y[2], map.q(x), v * std::sqrt(m),
                                0.5 * m * v * v + sys.potential(x), el_residual(sys, x, v, dy[1])});
    };

    ode::DormandPrince45<3> solver(to_ode(opts));
    const auto stats = solver.integrate(rhs, valid, ic.t0, State{ic.x0, ic.xdot0, ic.tau0}, t_end, times, sample);
    traj.meta = make_meta(opts, stats);
    return traj;
}

ReferenceTrajectory integrate_reference(const DifferentiableFn& V, double q0, double qdot0,
                                        double tau_end, const IntegratorOptions& opts) {
    const auto grid = uniform_grid(0.0, tau_end, opts.sample_dt);
    return integrate_reference(V, q0, qdot0, grid, opts);
}

ReferenceTrajectory integrate_reference(const DifferentiableFn& V, double q0, double qdot0,
                                        std::span<const double> taus, const IntegratorOptions& opts) {
    if (!V.domain().contains(q0)) throw DomainViolation("initial q outside reference domain");
    check_times(taus, 0.0);
    if (!(taus.back() > 0)) throw InvalidParameter("tau_end must be > 0");

    using State = std::array<double, 2>;
    auto rhs = [&](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -V.derivative(y[0]);
    };
    auto valid = [&](const State& y) { return V.domain().contains(y[0]) && std::isfinite(y[1]); };

    ReferenceTrajectory out;
    out.samples.reserve(taus.size());
    auto sample = [&](double tau, const State& y, const State&) {
        out.samples.push_back({tau, y[0], y[1], 0.5 * y[1] * y[1] + V(y[0])});
    };
    ode::DormandPrince45<2> solver(to_ode(opts));
    const auto stats = solver.integrate(rhs, valid, 0.0, State{q0, qdot0}, taus.back(), taus, sample);
    out.meta = make_meta(opts, stats);
    return out;
}

double estimate_period(std::span<const double> times, std::span<const double> signal) {
    if (times.size() != signal.size() || times.size() < 3)
        throw InsufficientCycles("period estimate needs matching time/signal series");
    double mean = 0.0;
    for (double s : signal) mean += s;
    mean /= static_cast<double>(signal.size());

    std::vector<double> up, down;
    int changes = 0;
    for (std::size_t i = 1; i < signal.size(); ++i) {
        const double a = signal[i - 1] - mean, b = signal[i] - mean;
        const bool pa = a >= 0, pb = b >= 0;
        if (pa == pb) continue;
        ++changes;
        const double tc = times[i - 1] + (times[i] - times[i - 1]) * a / (a - b);
        (pb ? up : down).push_back(tc);
    }
    if (changes < 3)
        throw InsufficientCycles("period estimate needs at least 3 sign changes, got " + std::to_string(changes));
    const auto& c = up.size() >= down.size() ? up : down;
    return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

double estimate_period(const Trajectory& traj) {
    std::vector<double> t, x;
    t.reserve(traj.samples.size());
    x.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        t.push_back(s.t);
        x.push_back(s.x);
    }
    return estimate_period(t, x);
}

double max_energy_drift(const Trajectory& traj) {
    if (traj.samples.empty()) return 0.0;
    const double e0 = traj.samples.front().energy;
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.energy - e0) / (1.0 + std::abs(e0)));
    return worst;
}

ReferenceTrajectory pushforward(const Trajectory& traj, const NonlocalMap& map) {
    ReferenceTrajectory out;
    out.meta = traj.meta;
    out.samples.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        if (i > 0 && !(s.tau > traj.samples[i - 1].tau))
            throw NonMonotoneTau("pushforward: rescaled time stops increasing at t=" + std::to_string(s.t));
        out.samples.push_back({s.tau, map.q(s.x), qdot_from_state(map.mass, s.x, s.xdot), s.energy});
    }
    return out;
}

HarmonicFit fit_harmonic(const ReferenceTrajectory& traj, double omega) {
    // Normal equations for q ≈ a cos(ωτ) + b sin(ωτ).
    double cc = 0, ss = 0, cs = 0, qc = 0, qs = 0;
    for (const auto& p : traj.samples) {
        const double c = std::cos(omega * p.tau), s = std::sin(omega * p.tau);
        cc += c * c;
        ss += s * s;
        cs += c * s;
        qc += p.q * c;
        qs += p.q * s;
    }
    const double det = cc * ss - cs * cs;
    if (!(std::abs(det) > 0)) throw InvalidParameter("fit_harmonic: degenerate sample set");
    const double a = (qc * ss - qs * cs) / det;
    const double b = (qs * cc - qc * cs) / det;
    HarmonicFit fit;
    fit.amplitude = std::hypot(a, b);
    fit.phase = std::atan2(-b, a);
    double sq = 0;
    for (const auto& p : traj.samples) {
        const double r = p.q - (a * std::cos(omega * p.tau) + b * std::sin(omega * p.tau));
        sq += r * r;
    }
    fit.rms = std::sqrt(sq / static_cast<double>(traj.samples.size()));
    return fit;
}

namespace {
double second_derivative(double x0, double y0, double x1, double y1, double x2, double y2) {
    return 2.0 * (y0 / ((x0 - x1) * (x0 - x2)) + y1 / ((x1 - x0) * (x1 - x2)) + y2 / ((x2 - x0) * (x2 - x1)));
}
}  // namespace

ReferenceResidual reference_equation_residual(const ReferenceTrajectory& traj,
                                              const DifferentiableFn& V, double data_error) {
    const auto& s = traj.samples;
    ReferenceResidual out;
    if (s.size() < 5) throw InvalidParameter("reference residual needs at least 5 samples");
    for (std::size_t i = 2; i + 2 < s.size(); ++i) {
        const double d1 = second_derivative(s[i - 1].tau, s[i - 1].q, s[i].tau, s[i].q, s[i + 1].tau, s[i + 1].q);
        const double d2 = second_derivative(s[i - 2].tau, s[i - 2].q, s[i].tau, s[i].q, s[i + 2].tau, s[i + 2].q);
        const double h1 = s[i].tau - s[i - 1].tau, h2 = s[i + 1].tau - s[i].tau;
        const double r = std::abs(d1 + V.derivative(s[i].q));
        const double bound = 2.0 * std::abs(d1 - d2) + 8.0 * data_error / (h1 * h2);
        out.max_residual = std::max(out.max_residual, r);
        out.max_bound = std::max(out.max_bound, bound);
        if (r > bound) out.within_bound = false;
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const auto old_precision = out.precision(17);
    out << std::defaultfloat;
    out << "t,x,xdot,tau,q,qdot_tau,energy,residual\n";
    for (const auto& s : traj.samples) {
        out << s.t << ',' << s.x << ',' << s.xdot << ',' << s.tau << ',' << s.q << ',' << s.qdot_tau << ','
            << s.energy << ',' << s.residual << '\n';
    }
    out.precision(old_precision);
}

}  // namespace pdm
