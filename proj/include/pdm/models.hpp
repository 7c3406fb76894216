#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdm/differentiable_fn.hpp"

namespace pdm {

/// Margin kept between integration/evaluation points and singular endpoints.
inline constexpr double kDomainGuard = 1e-9;

/// Half-width of the window used to sample unbounded domains.
inline constexpr double kSamplingRadius = 10.0;

enum class Family {
    ml1,        ///< Mathews-Lakshmanan I, V = ½mω²x², f = m
    ml2,        ///< Mathews-Lakshmanan II, V = −σω²m/2λ, f = βm'/2m
    shifted_ml, ///< shifted ML, V = ½mω²(x+ξ)², f = m
    quadratic,  ///< quadratic nonlinear oscillator, m = (1+λx)⁻⁴, f = 1
    morse,      ///< Morse-type, m = e^{2ηx}, f = η
    isotonic,   ///< PDM-deformed isotonic (Ermakov-Pinney target), f = m
};

std::string_view to_string(Family f) noexcept;
/// Accepts the canonical tags plus "sho" (mapped to ml1; caller sets λ = 0).
Family family_from_string(std::string_view name);
std::vector<Family> all_families();

/// A catalog model together with the amplitude/phase of the closed-form
/// solution it is paired with. Optional fields are derived by `normalized()`.
struct ModelFamily {
    Family family = Family::ml1;
    int sign = +1;                  ///< σ: +1 selects the 1+λx² branch
    std::optional<double> omega;    ///< reference-picture frequency ω
    double lambda = 0.0;
    double xi = 0.0;                ///< ShiftedML shift
    std::optional<double> beta;     ///< ML-II map scale, Isotonic strength
    std::optional<double> alpha;    ///< QuadraticNL / Morse x-space frequency
    double eta = 1.0;               ///< Morse
    double amplitude = 1.0;         ///< A
    double phase = 0.0;             ///< φ, or δ for Isotonic

    double w() const { return omega.value_or(1.0); }
    double b() const { return beta.value_or(0.0); }
    double a() const { return alpha.value_or(0.0); }

    friend bool operator==(const ModelFamily&, const ModelFamily&) = default;
};

/// Validates every parameter constraint and fills derived parameters
/// (ω, α, β). Throws InvalidParameter / InvalidAmplitude.
ModelFamily normalized(const ModelFamily& family);

/// Position-dependent-mass system: L = ½m(x)ẋ² − V(x), unit reference mass.
struct PdmSystem {
    DifferentiableFn mass;
    DifferentiableFn potential;
    Interval domain;         ///< already shrunk by kDomainGuard at singular ends
    double equilibrium = 0.0;

    bool contains(double x) const noexcept { return domain.contains(x); }
    /// Finite window used for random sampling and monotonicity scans:
    /// domain ∩ [x_eq − 10, x_eq + 10] with 2.5% trimmed from each end.
    Interval sampling_window() const noexcept {
        const Interval w = domain.clip(equilibrium, kSamplingRadius);
        const double trim = 0.025 * (w.hi - w.lo);
        return {w.lo + trim, w.hi - trim};
    }
};

/// Model domain for the family, guarded away from poles.
Interval model_domain(const ModelFamily& family);

PdmSystem build_model(const ModelFamily& family);

/// ẍ + ½(m'/m)ẋ² + V'/m. Throws DomainViolation outside the domain.
double el_residual(const PdmSystem& system, double x, double xdot, double xddot);

/// ẍ on a solution through (x, ẋ).
double acceleration(const PdmSystem& system, double x, double xdot);

/// PDM reaction-type force m'(x)ẋ²/2.
double pdm_reaction_force(const PdmSystem& system, double x, double xdot);

/// The equivalent potentials of an ML family. For ML-I/ML-II/ShiftedML
/// these are {½mω²(x+ξ)², −σmω²/2λ} on the family's mass; they differ by
/// a constant. Throws InvalidParameter for other families or λ = 0.
std::vector<PdmSystem> paired_potentials(const ModelFamily& family);

}  // namespace pdm
