#include "pdm/transform.hpp"

#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"
#include "pdm/numerics.hpp"

namespace pdm {

namespace {

Interval finite_window(Interval dom) {
    if (dom.bounded()) return dom;
    const double c = std::isfinite(dom.lo) ? dom.lo : (std::isfinite(dom.hi) ? dom.hi : 0.0);
    return dom.clip(c, kSamplingRadius);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

bool has_constant_sign_derivative(const DifferentiableFn& fn, Interval window, int grid) {
    window = finite_window(window);
    if (window.empty()) return false;
    const double h = (window.hi - window.lo) / grid;
    int sign = 0;
    for (int i = 0; i < grid; ++i) {
        const double d = fn.derivative(window.lo + (i + 0.5) * h);
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0) return false;
        if (sign == 0) sign = s;
        if (s != sign) return false;
    }
    return true;
}

double check_compatibility(const DifferentiableFn& m, const DifferentiableFn& f,
                           const DifferentiableFn& g, std::span<const double> xs) {
    double worst = 0.0;
    for (double x : xs) {
        const double mv = m(x), fv = f(x), gv = g(x);
        worst = std::max(worst, std::abs(gv - mv * fv * fv) / std::max(1.0, std::abs(gv)));
        if (fv == 0.0 || gv == 0.0) continue;
        const double lg = g.derivative(x) / gv;
        const double lf = f.derivative(x) / fv;
        const double lm = m.derivative(x) / mv;
        const double scale = 1.0 + std::abs(lg) + 2.0 * std::abs(lf) + std::abs(lm);
        worst = std::max(worst, std::abs(lg - 2.0 * lf - lm) / scale);
    }
    return worst;
}

double check_compatibility(const DifferentiableFn& m, const DifferentiableFn& f,
                           const DifferentiableFn& g, int samples) {
    const Interval dom = m.domain().intersect(f.domain()).intersect(g.domain());
    if (dom.empty() || samples <= 0) throw EmptyDomain("compatibility check: empty shared domain");
    const Interval w = finite_window(dom);
    std::vector<double> xs(static_cast<std::size_t>(samples));
    const double h = (w.hi - w.lo) / samples;
    for (int i = 0; i < samples; ++i) xs[static_cast<std::size_t>(i)] = w.lo + (i + 0.5) * h;
    return check_compatibility(m, f, g, xs);
}

double q_from_quadrature(const DifferentiableFn& m, const DifferentiableFn& f, double x0, double x) {
    const Interval dom = m.domain().intersect(f.domain());
    if (dom.empty()) throw EmptyDomain("q quadrature: empty shared domain");
    if (!dom.contains(x0) || !dom.contains(x))
        throw DomainViolation("q quadrature: [" + num(x0) + ", " + num(x) + "] leaves the domain");
    auto integrand = [&](double s) { return std::sqrt(m(s)) * f(s); };
    return numerics::adaptive_simpson(integrand, x0, x, 1e-10, 40).value;
}

double invert_q(const NonlocalMap& map, double q_target, Interval bracket) {
    double lo = std::min(bracket.lo, bracket.hi);
    double hi = std::max(bracket.lo, bracket.hi);
    if (!(map.domain.contains(lo) && map.domain.contains(hi)))
        throw DomainViolation("invert_q: bracket outside map domain");
    if (!has_constant_sign_derivative(map.q, {lo, hi}))
        throw NonMonotone("invert_q: q is not monotone on [" + num(lo) + ", " + num(hi) + "]");
    const double qlo = map.q(lo) - q_target;
    const double qhi = map.q(hi) - q_target;
    if (qlo == 0.0) return lo;
    if (qhi == 0.0) return hi;
    if ((qlo < 0) == (qhi < 0))
        throw NoBracket("invert_q: q(" + num(lo) + ") and q(" + num(hi) + ") do not straddle " +
                        num(q_target));
    auto fn = [&](double x) { return map.q(x) - q_target; };
    auto dfn = [&](double x) { return map.q.derivative(x); };
    return numerics::bisect_newton(fn, dfn, lo, hi, 1e-14).x;
}

double qdot_from_state(const DifferentiableFn& m, double x, double xdot) {
    if (!m.domain().contains(x)) throw DomainViolation("qdot_from_state: x=" + num(x) + " outside domain");
    return xdot * std::sqrt(m(x));
}

Linearization linearization_q(const PdmSystem& sys, const DifferentiableFn& f, double omega, double x) {
    if (!(omega > 0)) throw InvalidParameter("linearization_q: omega must be > 0");
    const Interval dom = sys.domain.intersect(f.domain());
    if (!dom.contains(x)) throw DomainViolation("linearization_q: x=" + num(x) + " outside domain");

    auto route = [&](double s) {
        const double fv = f(s);
        if (std::abs(fv) < std::numeric_limits<double>::min())
            throw DivisionByZero("linearization_q: f(" + num(s) + ") = 0");
        return sys.potential.derivative(s) / (omega * omega * std::sqrt(sys.mass(s)) * fv);
    };

    Linearization out;
    out.value = route(x);
    out.integrand = std::sqrt(sys.mass(x)) * f(x);
    double h = 1e-3 * std::max(1.0, std::abs(x));
    if (std::isfinite(dom.lo)) h = std::min(h, 0.05 * (x - dom.lo));
    if (std::isfinite(dom.hi)) h = std::min(h, 0.05 * (dom.hi - x));
    out.derivative = numerics::richardson_derivative(route, x, h);
    out.consistency_residual = std::abs(out.derivative - out.integrand);
    return out;
}

namespace {

// ML mass in the shifted variable u = x + ξ: m = 1/(1 + σλu²).
struct MlMass {
    double s, lambda, xi;
    double m(double x) const {
        const double u = x + xi;
        return 1.0 / (1.0 + s * lambda * u * u);
    }
    double dm(double x) const {
        const double u = x + xi, mm = m(x);
        return -2.0 * s * lambda * u * mm * mm;
    }
};

}  // namespace

DifferentiableFn derive_f_for_q_ansatz(const ModelFamily& in) {
    const ModelFamily fam = normalized(in);
    const PdmSystem sys = build_model(fam);
    switch (fam.family) {
        case Family::ml1:
        case Family::shifted_ml:
        case Family::isotonic:
            return sys.mass;
        case Family::ml2: {
            // βm'/2m = −σβλ x m
            const double c = -fam.sign * fam.b() * fam.lambda;
            const MlMass mm{static_cast<double>(fam.sign), fam.lambda, 0.0};
            return {[c, mm](double x) { return c * x * mm.m(x); },
                    [c, mm](double x) { return c * (mm.m(x) + x * mm.dm(x)); }, sys.domain};
        }
        case Family::quadratic:
            return DifferentiableFn::constant(1.0, sys.domain);
        case Family::morse:
            return DifferentiableFn::constant(fam.eta, sys.domain);
    }
    throw InvalidParameter("derive_f_for_q_ansatz: unknown family");
}

NonlocalMap catalog_map(const ModelFamily& in) {
    const ModelFamily fam = normalized(in);
    const PdmSystem sys = build_model(fam);
    NonlocalMap map;
    map.mass = sys.mass;
    map.f = derive_f_for_q_ansatz(fam);
    map.domain = sys.domain;
    const Interval dom = sys.domain;

    switch (fam.family) {
        case Family::ml1:
        case Family::shifted_ml:
        case Family::isotonic: {
            const double xi = fam.family == Family::shifted_ml ? fam.xi : 0.0;
            const MlMass mm{static_cast<double>(fam.sign), fam.lambda, xi};
            map.g = {[mm](double x) { return std::pow(mm.m(x), 3); },
                     [mm](double x) { return 3.0 * mm.m(x) * mm.m(x) * mm.dm(x); }, dom};
            map.q = {[mm, xi](double x) { return (x + xi) * std::sqrt(mm.m(x)); },
                     [mm](double x) { return std::pow(mm.m(x), 1.5); }, dom};
            break;
        }
        case Family::ml2: {
            const double beta = fam.b(), lambda = fam.lambda;
            const MlMass mm{static_cast<double>(fam.sign), lambda, 0.0};
            // g = β²m'²/4m = λ x² m³ (β²λ = 1)
            map.g = {[mm, lambda](double x) { return lambda * x * x * std::pow(mm.m(x), 3); },
                     [mm, lambda](double x) {
                         const double m = mm.m(x);
                         return lambda * (2.0 * x * m * m * m + 3.0 * x * x * m * m * mm.dm(x));
                     },
                     dom};
            map.q = {[mm, beta](double x) { return beta * std::sqrt(mm.m(x)); },
                     [mm, beta](double x) { return beta * mm.dm(x) / (2.0 * std::sqrt(mm.m(x))); }, dom};
            break;
        }
        case Family::quadratic: {
            const double lambda = fam.lambda;
            map.g = sys.mass;
            map.q = {[lambda](double x) { return x / (1.0 + lambda * x); },
                     [lambda](double x) { return std::pow(1.0 + lambda * x, -2); }, dom};
            break;
        }
        case Family::morse: {
            const double eta = fam.eta;
            map.g = {[eta](double x) { return eta * eta * std::exp(2.0 * eta * x); },
                     [eta](double x) { return 2.0 * eta * eta * eta * std::exp(2.0 * eta * x); }, dom};
            map.q = {[eta](double x) { return std::expm1(eta * x); },
                     [eta](double x) { return eta * std::exp(eta * x); }, dom};
            break;
        }
    }
    map.monotone = has_constant_sign_derivative(map.q, sys.sampling_window());
    return map;
}

NonlocalMap numeric_map(const DifferentiableFn& m, const DifferentiableFn& f, double anchor,
                        double q_anchor) {
    NonlocalMap map;
    map.mass = m;
    map.f = f;
    map.domain = m.domain().intersect(f.domain());
    if (map.domain.empty()) throw EmptyDomain("numeric_map: empty shared domain");
    if (!map.domain.contains(anchor)) throw DomainViolation("numeric_map: anchor outside domain");
    map.g = {[m, f](double x) { return m(x) * f(x) * f(x); },
             [m, f](double x) {
                 const double fv = f(x);
                 return m.derivative(x) * fv * fv + 2.0 * m(x) * fv * f.derivative(x);
             },
             map.domain};
    map.q = {[m, f, anchor, q_anchor](double x) { return q_anchor + q_from_quadrature(m, f, anchor, x); },
             [m, f](double x) { return std::sqrt(m(x)) * f(x); }, map.domain};
    map.monotone = has_constant_sign_derivative(map.q, map.domain.clip(anchor, kSamplingRadius));
    return map;
}

DifferentiableFn reference_potential(const ModelFamily& in) {
    const ModelFamily fam = normalized(in);
    const double w2 = fam.w() * fam.w();
    if (fam.family == Family::isotonic) {
        const double beta = fam.b();
        return {[w2, beta](double q) { return 0.5 * w2 * q * q + beta / (q * q); },
                [w2, beta](double q) { return w2 * q - 2.0 * beta / (q * q * q); },
                Interval{kDomainGuard, kInf}};
    }
    const double k = (fam.family == Family::ml2 && fam.sign > 0) ? -w2 : w2;
    return {[k](double q) { return 0.5 * k * q * q; }, [k](double q) { return k * q; }};
}

}  // namespace pdm
