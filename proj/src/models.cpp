#include "pdm/models.hpp"

#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"

namespace pdm {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
}

void require_amplitude(bool ok, const std::string& what) {
    if (!ok) throw InvalidAmplitude(what);
}

bool finite(double v) { return std::isfinite(v); }

// Either omega or alpha may be given; alpha = scale * omega.
void resolve_alpha(ModelFamily& f, double scale, const char* relation) {
    if (f.alpha && f.omega) {
        const double expect = scale * *f.omega;
        require(std::abs(*f.alpha - expect) <= 1e-12 * std::max(1.0, std::abs(expect)),
                std::string("constraint ") + relation + " violated: alpha=" + fmt(*f.alpha) +
                    ", omega=" + fmt(*f.omega));
    } else if (f.alpha) {
        require(*f.alpha > 0 && finite(*f.alpha), "alpha must be > 0");
        f.omega = *f.alpha / scale;
    } else {
        f.omega = f.omega.value_or(1.0);
        f.alpha = scale * *f.omega;
    }
}

// m = 1/(1 + σλu²) and its u-derivative.
struct MlMass {
    double s, lambda;
    double m(double u) const { return 1.0 / (1.0 + s * lambda * u * u); }
    double dm(double u) const {
        const double mm = m(u);
        return -2.0 * s * lambda * u * mm * mm;
    }
};

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::ml1: return "ml1";
        case Family::ml2: return "ml2";
        case Family::shifted_ml: return "shifted_ml";
        case Family::quadratic: return "quadratic";
        case Family::morse: return "morse";
        case Family::isotonic: return "isotonic";
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    for (Family f : all_families())
        if (to_string(f) == name) return f;
    if (name == "sho") return Family::ml1;
    throw InvalidParameter("unknown model family '" + std::string(name) + "'");
}

std::vector<Family> all_families() {
    return {Family::ml1,       Family::ml2,   Family::shifted_ml,
            Family::quadratic, Family::morse, Family::isotonic};
}

ModelFamily normalized(const ModelFamily& in) {
    ModelFamily f = in;
    require(f.sign == 1 || f.sign == -1, "sign must be +1 or -1");
    require(finite(f.lambda) && f.lambda >= 0, "lambda must be >= 0, got " + fmt(f.lambda));
    require(finite(f.amplitude) && f.amplitude >= 0, "amplitude A must be >= 0");
    require(finite(f.phase), "phase must be finite");
    require(finite(f.xi), "xi must be finite");
    if (f.omega) require(finite(*f.omega) && *f.omega > 0, "omega must be > 0");
    const double A = f.amplitude;

    switch (f.family) {
        case Family::ml1:
        case Family::shifted_ml:
            f.omega = f.omega.value_or(1.0);
            require_amplitude(1.0 + f.sign * f.lambda * A * A > 0,
                              "amplitude requires 1 - lambda*A^2 > 0 on the minus branch");
            break;
        case Family::ml2: {
            f.omega = f.omega.value_or(1.0);
            require(f.lambda > 0, "ML-II requires lambda > 0 (beta^2 = 1/lambda)");
            if (f.beta) {
                require(*f.beta != 0 && finite(*f.beta), "ML-II requires beta != 0");
                require(std::abs(*f.beta * *f.beta * f.lambda - 1.0) <= 1e-12,
                        "ML-II constraint beta^2 = 1/lambda violated");
            } else {
                f.beta = 1.0 / std::sqrt(f.lambda);
            }
            require_amplitude(1.0 + f.sign * f.lambda * A * A > 0,
                              "amplitude requires 1 - lambda*A^2 > 0 on the minus branch");
            break;
        }
        case Family::quadratic:
            require(f.lambda > 0, "quadratic oscillator requires lambda > 0");
            resolve_alpha(f, 1.0, "alpha^2 = omega^2");
            require_amplitude(A * f.lambda < 1.0, "quadratic oscillator requires 0 <= A < 1/lambda");
            break;
        case Family::morse:
            require(finite(f.eta) && f.eta > 0, "Morse requires eta > 0");
            resolve_alpha(f, f.eta, "alpha^2 = omega^2 eta^2");
            require_amplitude(A < 1.0, "Morse requires 0 <= A < 1");
            break;
        case Family::isotonic: {
            f.omega = f.omega.value_or(1.0);
            require(f.beta.has_value() && finite(*f.beta) && *f.beta > 0,
                    "isotonic requires beta > 0");
            require_amplitude(A > 0, "isotonic requires A > 0");
            const double k = 1.0 + f.sign * f.lambda * A * A;
            require_amplitude(k > 0, "isotonic requires 1 - lambda*A^2 > 0 on the minus branch");
            const double w = *f.omega;
            const double Omega2 = w * w / k - f.sign * 2.0 * f.lambda * *f.beta / (A * A);
            require_amplitude(Omega2 > 0, "isotonic frequency relation gives Omega^2 <= 0");
            if (f.sign < 0 && f.lambda > 0) {
                const double inner = std::sqrt(2.0 * *f.beta / Omega2) / A;
                require_amplitude(inner * inner * f.lambda < 1.0,
                                  "isotonic inner turning point outside |x| < 1/sqrt(lambda)");
            }
            break;
        }
    }
    return f;
}

Interval model_domain(const ModelFamily& f) {
    const double g = kDomainGuard;
    switch (f.family) {
        case Family::ml1:
        case Family::ml2:
        case Family::shifted_ml: {
            const double c = f.family == Family::shifted_ml ? -f.xi : 0.0;
            if (f.sign > 0 || f.lambda == 0) return {};
            const double r = 1.0 / std::sqrt(f.lambda);
            return {c - r + g, c + r - g};
        }
        case Family::quadratic:
            return {-1.0 / f.lambda + g, kInf};
        case Family::morse:
            return {};
        case Family::isotonic:
            if (f.sign > 0 || f.lambda == 0) return {g, kInf};
            return {g, 1.0 / std::sqrt(f.lambda) - g};
    }
    return {};
}

PdmSystem build_model(const ModelFamily& in) {
    const ModelFamily f = normalized(in);
    const Interval dom = model_domain(f);
    const double w = f.w();
    const double w2 = w * w;
    const double lambda = f.lambda;
    const double s = f.sign;
    PdmSystem sys;
    sys.domain = dom;

    switch (f.family) {
        case Family::ml1:
        case Family::ml2:
        case Family::shifted_ml: {
            const double xi = f.family == Family::shifted_ml ? f.xi : 0.0;
            const MlMass mm{s, lambda};
            sys.mass = {[mm, xi](double x) { return mm.m(x + xi); },
                        [mm, xi](double x) { return mm.dm(x + xi); }, dom};
            // V' = ω²(x+ξ)m² for both the ½mω²u² and the −σmω²/2λ forms.
            auto dV = [mm, xi, w2](double x) {
                const double m = mm.m(x + xi);
                return w2 * (x + xi) * m * m;
            };
            if (f.family == Family::ml2) {
                sys.potential = {[mm, s, w2, lambda](double x) { return -s * w2 * mm.m(x) / (2.0 * lambda); },
                                 dV, dom};
            } else {
                sys.potential = {[mm, xi, w2](double x) {
                                     const double u = x + xi;
                                     return 0.5 * w2 * u * u * mm.m(u);
                                 },
                                 dV, dom};
            }
            sys.equilibrium = -xi;
            break;
        }
        case Family::quadratic: {
            const double a2 = f.a() * f.a();
            sys.mass = {[lambda](double x) { return std::pow(1.0 + lambda * x, -4); },
                        [lambda](double x) { return -4.0 * lambda * std::pow(1.0 + lambda * x, -5); }, dom};
            sys.potential = {[lambda, a2](double x) {
                                 const double p = 1.0 + lambda * x;
                                 return -a2 / (2.0 * lambda * lambda) * (1.0 + 2.0 * lambda * x) / (p * p);
                             },
                             [lambda, a2](double x) { return a2 * x * std::pow(1.0 + lambda * x, -3); }, dom};
            break;
        }
        case Family::morse: {
            const double eta = f.eta;
            sys.mass = {[eta](double x) { return std::exp(2.0 * eta * x); },
                        [eta](double x) { return 2.0 * eta * std::exp(2.0 * eta * x); }, dom};
            // ½mω²(1 − e^{−ηx})², written as ½ω²(e^{ηx} − 1)².
            sys.potential = {[eta, w2](double x) {
                                 const double e = std::expm1(eta * x);
                                 return 0.5 * w2 * e * e;
                             },
                             [eta, w2](double x) { return w2 * eta * std::expm1(eta * x) * std::exp(eta * x); },
                             dom};
            break;
        }
        case Family::isotonic: {
            const MlMass mm{s, lambda};
            const double beta = f.b();
            sys.mass = {[mm](double x) { return mm.m(x); }, [mm](double x) { return mm.dm(x); }, dom};
            sys.potential = {[mm, w2, beta, s, lambda](double x) {
                                 return 0.5 * w2 * x * x * mm.m(x) + beta * (1.0 + s * lambda * x * x) / (x * x);
                             },
                             [mm, w2, beta](double x) {
                                 const double m = mm.m(x);
                                 return w2 * x * m * m - 2.0 * beta / (x * x * x);
                             },
                             dom};
            // V' = 0  <=>  x² (ω − σλ√(2β)) = √(2β)
            const double r = std::sqrt(2.0 * beta);
            sys.equilibrium = std::sqrt(r / (w - s * lambda * r));
            break;
        }
    }
    return sys;
}

namespace {
void check_domain(const PdmSystem& sys, double x, const char* op) {
    if (!sys.contains(x))
        throw DomainViolation(std::string(op) + ": x=" + fmt(x) + " outside model domain (" +
                              fmt(sys.domain.lo) + ", " + fmt(sys.domain.hi) + ")");
}
}  // namespace

double acceleration(const PdmSystem& sys, double x, double xdot) {
    check_domain(sys, x, "acceleration");
    const double m = sys.mass(x);
    return -0.5 * sys.mass.derivative(x) / m * xdot * xdot - sys.potential.derivative(x) / m;
}

double el_residual(const PdmSystem& sys, double x, double xdot, double xddot) {
    check_domain(sys, x, "el_residual");
    const double m = sys.mass(x);
    return xddot + 0.5 * sys.mass.derivative(x) / m * xdot * xdot + sys.potential.derivative(x) / m;
}

double pdm_reaction_force(const PdmSystem& sys, double x, double xdot) {
    check_domain(sys, x, "pdm_reaction_force");
    return 0.5 * sys.mass.derivative(x) * xdot * xdot;
}

std::vector<PdmSystem> paired_potentials(const ModelFamily& in) {
    const ModelFamily f = normalized(in);
    if (f.family != Family::ml1 && f.family != Family::ml2 && f.family != Family::shifted_ml)
        throw InvalidParameter("paired potentials exist only for the ML families");
    if (f.lambda <= 0) throw InvalidParameter("paired potentials require lambda > 0");

    ModelFamily harmonic = f;
    harmonic.family = Family::shifted_ml;
    harmonic.beta.reset();
    if (f.family != Family::shifted_ml) harmonic.xi = 0.0;
    PdmSystem a = build_model(harmonic);

    PdmSystem b = a;
    const double s = f.sign, lambda = f.lambda, w2 = f.w() * f.w();
    const DifferentiableFn mass = a.mass;
    b.potential = {[mass, s, lambda, w2](double x) { return -s * w2 * mass(x) / (2.0 * lambda); },
                   [mass, s, lambda, w2](double x) { return -s * w2 * mass.derivative(x) / (2.0 * lambda); },
                   a.domain};
    return {a, b};
}

}  // namespace pdm
