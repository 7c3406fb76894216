#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pdm/models.hpp"
#include "pdm/transform.hpp"

namespace pdm {

struct InitialState {
    double x0 = 0.0;
    double xdot0 = 0.0;
    double t0 = 0.0;
    double tau0 = 0.0;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double sample_dt = 0.01;  ///< spacing of the uniform output grid
    double h_init = 0.0;
    long max_steps = 50'000'000;
};

struct TrajectoryMeta {
    std::string integrator = "dopri5(4)";
    double rtol = 0.0;
    double atol = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;
    long rhs_evaluations = 0;
};

/// One output record. `residual` is the Euler-Lagrange residual of the
/// dense-output state, with ẍ from the interpolant of ẋ.
struct TrajectorySample {
    double t, x, xdot, tau, q, qdot_tau, energy, residual;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryMeta meta;
};

/// A trajectory of the constant unit-mass reference picture, in rescaled time.
struct ReferenceSample {
    double tau, q, qdot, energy;
};

struct ReferenceTrajectory {
    std::vector<ReferenceSample> samples;
    TrajectoryMeta meta;
};

/// t0, t0+dt, ..., with t_end always included as the last point.
std::vector<double> uniform_grid(double t0, double t_end, double dt);

/// ½ m(x) ẋ² + V(x).
double energy(const PdmSystem& system, double x, double xdot);

/// Integrates ẍ = −½(m'/m)ẋ² − V'/m together with τ̇ = f(x), sampling on a
/// uniform grid of spacing opts.sample_dt. Throws DomainEscape / StepUnderflow.
Trajectory integrate_pdm(const PdmSystem& system, const NonlocalMap& map, const InitialState& ic,
                         double t_end, const IntegratorOptions& opts = {});
Trajectory integrate_pdm(const PdmSystem& system, const NonlocalMap& map, const InitialState& ic,
                         std::span<const double> sample_times, const IntegratorOptions& opts = {});

/// Integrates q'' = −V'(q) in rescaled time from τ = 0.
ReferenceTrajectory integrate_reference(const DifferentiableFn& potential_q, double q0, double qdot0,
                                        double tau_end, const IntegratorOptions& opts = {});
ReferenceTrajectory integrate_reference(const DifferentiableFn& potential_q, double q0, double qdot0,
                                        std::span<const double> sample_taus,
                                        const IntegratorOptions& opts = {});

/// Period from same-direction crossings of the mean-centred signal, linear
/// interpolation between samples, averaged over all full cycles.
/// Throws InsufficientCycles with fewer than 3 sign changes.
double estimate_period(std::span<const double> times, std::span<const double> signal);
double estimate_period(const Trajectory& traj);

/// max_i |E_i − E_0| / (1 + |E_0|).
double max_energy_drift(const Trajectory& traj);

/// Re-expresses the samples as (τ, q, q̃) using `map`. The energy column is
/// carried over (it equals the reference energy up to a constant).
/// Throws NonMonotoneTau unless τ is strictly increasing.
ReferenceTrajectory pushforward(const Trajectory& traj, const NonlocalMap& map);

struct HarmonicFit {
    double amplitude = 0.0;
    double phase = 0.0;
    double rms = 0.0;
};

/// Least-squares fit of q(τ) to Â cos(ωτ + φ̂) at known ω.
HarmonicFit fit_harmonic(const ReferenceTrajectory& traj, double omega);

struct ReferenceResidual {
    double max_residual = 0.0;  ///< max |q'' + V'(q)| with q'' by finite differences
    double max_bound = 0.0;
    bool within_bound = true;   ///< every |residual_i| <= bound_i
};

/// Checks the reference equation of motion on sampled (τ, q). q'' uses the
/// nonuniform three-point formula; each point's bound is twice the
/// difference to the wide-stencil estimate (a truncation estimate) plus
/// the amplification of `data_error` in the samples.
ReferenceResidual reference_equation_residual(const ReferenceTrajectory& traj,
                                              const DifferentiableFn& potential_q,
                                              double data_error = 1e-9);

/// Header "t,x,xdot,tau,q,qdot_tau,energy,residual", 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace pdm
