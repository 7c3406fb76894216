#pragma once

#include <span>

#include "pdm/differentiable_fn.hpp"
#include "pdm/models.hpp"

namespace pdm {

/// Nonlocal point transformation q = ∫√m f dx, dτ = f(x) dt, with the
/// compatibility function g = m f².
struct NonlocalMap {
    DifferentiableFn mass;
    DifferentiableFn f;  ///< time rescaler dτ/dt
    DifferentiableFn g;
    DifferentiableFn q;  ///< q(x), q'(x) = √m f
    Interval domain;
    bool monotone = false;  ///< q' keeps one sign over the sampling window
};

/// Grid size for monotonicity scans.
inline constexpr int kMonotoneGrid = 1024;

/// True iff `fn.derivative` keeps a strict, constant sign at the 1024
/// interior grid points of `window`.
bool has_constant_sign_derivative(const DifferentiableFn& fn, Interval window,
                                  int grid = kMonotoneGrid);

/// max over `xs` of the compatibility residual: the larger of
/// |g − m f²| / max(1, |g|) and the logarithmic form
/// |g'/g − 2f'/f − m'/m| / (1 + |g'/g| + 2|f'/f| + |m'/m|).
double check_compatibility(const DifferentiableFn& m, const DifferentiableFn& f,
                           const DifferentiableFn& g, std::span<const double> xs);

/// Same, on `samples` evenly spaced interior points of the shared domain
/// (unbounded domains are clipped to ±kSamplingRadius). Throws EmptyDomain.
double check_compatibility(const DifferentiableFn& m, const DifferentiableFn& f,
                           const DifferentiableFn& g, int samples);

/// ∫_{x0}^{x} √m(s) f(s) ds by adaptive Simpson (abs tol 1e-10, depth 40).
double q_from_quadrature(const DifferentiableFn& m, const DifferentiableFn& f, double x0, double x);

/// Solves q(x) = q_target inside `bracket` (endpoints included).
/// Throws NonMonotone if q is not monotone on the bracket and NoBracket if
/// the endpoint values do not straddle the target.
double invert_q(const NonlocalMap& map, double q_target, Interval bracket);

/// q̃ = dq/dτ = ẋ √m(x).
double qdot_from_state(const DifferentiableFn& m, double x, double xdot);

struct Linearization {
    double value = 0.0;                 ///< V'/(ω² √m f)
    double derivative = 0.0;            ///< d/dx of value (Richardson)
    double integrand = 0.0;             ///< √m f
    double consistency_residual = 0.0;  ///< |derivative − integrand|
};

/// The q(x) demanded by the linear-oscillator mapping condition, together
/// with a check that its derivative reproduces √m f.
Linearization linearization_q(const PdmSystem& system, const DifferentiableFn& f, double omega,
                              double x);

/// The time rescaler f(x) the catalog family uses for its q-ansatz.
DifferentiableFn derive_f_for_q_ansatz(const ModelFamily& family);

/// The family's map with its closed-form q, anchored at equilibrium
/// (q(−ξ) = 0 for ShiftedML, q(0) = β for ML-II, q(0) = 0 otherwise).
NonlocalMap catalog_map(const ModelFamily& family);

/// A map for an arbitrary (m, f): g = m f² and q by quadrature from
/// `anchor` with q(anchor) = q_anchor.
NonlocalMap numeric_map(const DifferentiableFn& m, const DifferentiableFn& f, double anchor,
                        double q_anchor = 0.0);

/// V(q) of the constant unit-mass reference picture for a catalog family.
/// Harmonic ½ω²q² for the oscillator families (−½ω²q² for ML-II on the
/// σ = +1 branch), ½ω²q² + β/q² for Isotonic.
DifferentiableFn reference_potential(const ModelFamily& family);

}  // namespace pdm
