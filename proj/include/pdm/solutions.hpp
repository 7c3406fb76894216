#pragma once

#include "pdm/models.hpp"

namespace pdm {

/// Position, velocity and acceleration at one instant.
struct Kinematics {
    double x = 0.0;
    double xdot = 0.0;
    double xddot = 0.0;
};

/// x-space frequency of the family's closed-form solution:
/// ML-I/II, ShiftedML: ω/√(1+σλA²); QuadraticNL: α = ω; Morse: α = ωη;
/// Isotonic: Ω² = ω²/(1+σλA²) − 2σλβ/A².
/// Throws InvalidAmplitude when the relation has no real positive root.
double omega_effective(const ModelFamily& family);

/// Inverse isotonic relation: ω given Ω, ω² = (1+σλA²)(Ω² + 2σλβ/A²).
double isotonic_omega_from_Omega(int sign, double lambda, double amplitude, double beta, double Omega);

/// Isotonic family whose x-space frequency is `Omega`.
ModelFamily isotonic_with_frequency(int sign, double lambda, double beta, double amplitude, double Omega,
                                    double delta = 0.0);

/// Exact solution of a catalog family, with analytic time derivatives.
class ClosedFormSolution {
public:
    explicit ClosedFormSolution(const ModelFamily& family);

    Kinematics evaluate(double t) const;

    const ModelFamily& family() const noexcept { return family_; }
    double frequency() const noexcept { return frequency_; }
    /// Period of x(t): 2π/Ω, or π/Ω for Isotonic (sin² has half the period).
    double period() const noexcept;

private:
    ModelFamily family_;
    double frequency_;
};

/// Solution of the reference (unit-mass) equation in rescaled time.
class ReferenceSolution {
public:
    enum class Kind { harmonic, inverted, ermakov_pinney };

    static ReferenceSolution harmonic(double amplitude, double omega, double phase);
    /// q'' = ω²q: q = A cosh(ωτ + φ).
    static ReferenceSolution inverted(double amplitude, double omega, double phase);
    /// q = (1/ωA)√((ω²A⁴ − 2β) sin²(ωτ + δ) + 2β).
    static ReferenceSolution ermakov_pinney(double amplitude, double omega, double beta, double delta);

    /// The solution through (q0, q̃0) at τ = 0 for the family's reference
    /// potential.
    static ReferenceSolution from_state(const ModelFamily& family, double q0, double qdot0);

    double q(double tau) const;
    double qdot(double tau) const;

    Kind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    double phase() const noexcept { return phase_; }

private:
    ReferenceSolution(Kind k, double a, double w, double p, double b)
        : kind_(k), amplitude_(a), omega_(w), phase_(p), beta_(b) {}

    Kind kind_;
    double amplitude_;
    double omega_;
    double phase_;
    double beta_;
    // inverted: q = cosh_coef cosh(ωτ) + sinh_coef sinh(ωτ)
    double cosh_coef_ = 0.0;
    double sinh_coef_ = 0.0;
};

/// q(τ) of the reference picture using the family's own A, ω and φ (δ):
/// harmonic for the oscillator families, Ermakov-Pinney for Isotonic.
double reference_solution_q(const ModelFamily& family, double tau);

}  // namespace pdm
