#include "pdm/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdm/errors.hpp"

namespace pdm {

double omega_effective(const ModelFamily& in) {
    const ModelFamily f = normalized(in);
    const double A = f.amplitude;
    switch (f.family) {
        case Family::ml1:
        case Family::ml2:
        case Family::shifted_ml: {
            const double k = 1.0 + f.sign * f.lambda * A * A;
            if (!(k > 0)) throw InvalidAmplitude("1 + sigma*lambda*A^2 must be > 0");
            return f.w() / std::sqrt(k);
        }
        case Family::quadratic:
        case Family::morse:
            return f.a();
        case Family::isotonic: {
            const double k = 1.0 + f.sign * f.lambda * A * A;
            const double W2 = f.w() * f.w() / k - f.sign * 2.0 * f.lambda * f.b() / (A * A);
            if (!(W2 > 0)) throw InvalidAmplitude("isotonic relation gives Omega^2 <= 0");
            return std::sqrt(W2);
        }
    }
    throw InvalidParameter("omega_effective: unknown family");
}

double isotonic_omega_from_Omega(int sign, double lambda, double A, double beta, double Omega) {
    if (!(Omega > 0) || !(A > 0)) throw InvalidParameter("isotonic relation needs Omega > 0 and A > 0");
    const double w2 = (1.0 + sign * lambda * A * A) * (Omega * Omega + sign * 2.0 * lambda * beta / (A * A));
    if (!(w2 > 0)) throw InvalidAmplitude("isotonic relation gives omega^2 <= 0");
    return std::sqrt(w2);
}

ModelFamily isotonic_with_frequency(int sign, double lambda, double beta, double A, double Omega,
                                    double delta) {
    ModelFamily f;
    f.family = Family::isotonic;
    f.sign = sign;
    f.lambda = lambda;
    f.beta = beta;
    f.amplitude = A;
    f.phase = delta;
    f.omega = isotonic_omega_from_Omega(sign, lambda, A, beta, Omega);
    return normalized(f);
}

ClosedFormSolution::ClosedFormSolution(const ModelFamily& family)
    : family_(normalized(family)), frequency_(omega_effective(family_)) {}

double ClosedFormSolution::period() const noexcept {
    const double full = 2.0 * std::numbers::pi / frequency_;
    return family_.family == Family::isotonic ? 0.5 * full : full;
}

Kinematics ClosedFormSolution::evaluate(double t) const {
    const double A = family_.amplitude;
    const double W = frequency_;
    const double th = W * t + family_.phase;
    const double c = std::cos(th), s = std::sin(th);
    switch (family_.family) {
        case Family::ml1:
        case Family::ml2:
            return {A * c, -A * W * s, -A * W * W * c};
        case Family::shifted_ml:
            return {A * c - family_.xi, -A * W * s, -A * W * W * c};
        case Family::quadratic: {
            // x = Ac/D, D = 1 − λAc, dx/dc = A/D²
            const double lA = family_.lambda * A;
            const double D = 1.0 - lA * c;
            const double cd = -W * s, cdd = -W * W * c;
            const double xdot = A / (D * D) * cd;
            const double xddot = 2.0 * A * lA * cd * cd / (D * D * D) + A / (D * D) * cdd;
            return {A * c / D, xdot, xddot};
        }
        case Family::morse: {
            // x = ln(u)/η, u = 1 + Ac
            const double eta = family_.eta;
            const double u = 1.0 + A * c;
            const double ud = -A * W * s, udd = -A * W * W * c;
            return {std::log(u) / eta, ud / (eta * u), (udd * u - ud * ud) / (eta * u * u)};
        }
        case Family::isotonic: {
            // x = √P/(ΩA), P = K sin²θ + 2β
            const double beta = family_.b();
            const double K = W * W * A * A * A * A - 2.0 * beta;
            const double P = K * s * s + 2.0 * beta;
            const double Pd = K * W * std::sin(2.0 * th);
            const double Pdd = 2.0 * K * W * W * std::cos(2.0 * th);
            const double r = std::sqrt(P);
            const double scale = 1.0 / (W * A);
            return {scale * r, scale * Pd / (2.0 * r), scale * (Pdd / (2.0 * r) - Pd * Pd / (4.0 * P * r))};
        }
    }
    return {};
}

ReferenceSolution ReferenceSolution::harmonic(double amplitude, double omega, double phase) {
    return {Kind::harmonic, amplitude, omega, phase, 0.0};
}

ReferenceSolution ReferenceSolution::inverted(double amplitude, double omega, double phase) {
    ReferenceSolution r{Kind::inverted, amplitude, omega, phase, 0.0};
    r.cosh_coef_ = amplitude * std::cosh(phase);
    r.sinh_coef_ = amplitude * std::sinh(phase);
    return r;
}

ReferenceSolution ReferenceSolution::ermakov_pinney(double amplitude, double omega, double beta, double delta) {
    if (!(amplitude > 0) || !(omega > 0) || !(beta > 0))
        throw InvalidParameter("Ermakov-Pinney solution needs A, omega, beta > 0");
    return {Kind::ermakov_pinney, amplitude, omega, delta, beta};
}

ReferenceSolution ReferenceSolution::from_state(const ModelFamily& in, double q0, double qdot0) {
    const ModelFamily f = normalized(in);
    const double w = f.w();
    if (f.family == Family::isotonic) {
        const double beta = f.b();
        if (!(q0 > 0)) throw DomainViolation("Ermakov-Pinney state needs q > 0");
        const double E = 0.5 * qdot0 * qdot0 + 0.5 * w * w * q0 * q0 + beta / (q0 * q0);
        // turning points X = A² solve ½ω²X² − E X + β = 0; take the outer one
        const double disc = std::max(0.0, E * E - 2.0 * w * w * beta);
        const double A2 = (E + std::sqrt(disc)) / (w * w);
        const double A = std::sqrt(A2);
        const double K = w * w * A2 * A2 - 2.0 * beta;
        double delta = 0.0;
        if (K > 1e-300) {
            const double s0 = std::clamp((w * w * A2 * q0 * q0 - 2.0 * beta) / K, 0.0, 1.0);
            delta = std::asin(std::sqrt(s0));
            if (q0 * qdot0 < 0) delta = std::numbers::pi - delta;
        }
        return ermakov_pinney(A, w, beta, delta);
    }
    if (f.family == Family::ml2 && f.sign > 0) {
        ReferenceSolution r{Kind::inverted, 0.0, w, 0.0, 0.0};
        r.cosh_coef_ = q0;
        r.sinh_coef_ = qdot0 / w;
        return r;
    }
    return harmonic(std::hypot(q0, qdot0 / w), w, std::atan2(-qdot0 / w, q0));
}

double ReferenceSolution::q(double tau) const {
    const double th = omega_ * tau + phase_;
    switch (kind_) {
        case Kind::harmonic:
            return amplitude_ * std::cos(th);
        case Kind::inverted:
            return cosh_coef_ * std::cosh(omega_ * tau) + sinh_coef_ * std::sinh(omega_ * tau);
        case Kind::ermakov_pinney: {
            const double A = amplitude_, s = std::sin(th);
            const double K = omega_ * omega_ * A * A * A * A - 2.0 * beta_;
            return std::sqrt(K * s * s + 2.0 * beta_) / (omega_ * A);
        }
    }
    return 0.0;
}

double ReferenceSolution::qdot(double tau) const {
    const double th = omega_ * tau + phase_;
    switch (kind_) {
        case Kind::harmonic:
            return -amplitude_ * omega_ * std::sin(th);
        case Kind::inverted:
            return omega_ * (cosh_coef_ * std::sinh(omega_ * tau) + sinh_coef_ * std::cosh(omega_ * tau));
        case Kind::ermakov_pinney: {
            const double A = amplitude_, s = std::sin(th);
            const double K = omega_ * omega_ * A * A * A * A - 2.0 * beta_;
            const double P = K * s * s + 2.0 * beta_;
            return K * omega_ * std::sin(2.0 * th) / (2.0 * omega_ * A * std::sqrt(P));
        }
    }
    return 0.0;
}

double reference_solution_q(const ModelFamily& in, double tau) {
    const ModelFamily f = normalized(in);
    if (f.family == Family::isotonic)
        return ReferenceSolution::ermakov_pinney(f.amplitude, f.w(), f.b(), f.phase).q(tau);
    if (f.family == Family::ml2 && f.sign > 0)
        return ReferenceSolution::inverted(f.amplitude, f.w(), f.phase).q(tau);
    return ReferenceSolution::harmonic(f.amplitude, f.w(), f.phase).q(tau);
}

}  // namespace pdm
