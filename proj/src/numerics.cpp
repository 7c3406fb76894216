#include "pdm/numerics.hpp"

#include <cmath>

#include "pdm/errors.hpp"

namespace pdm::numerics {

namespace {

struct Simpson {
    const std::function<double(double)>& fn;
    int max_depth;
    int evaluations = 0;
    double error = 0.0;
    bool failed = false;

    double eval(double x) {
        ++evaluations;
        return fn(x);
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (depth >= max_depth || !std::isfinite(delta)) {
            failed = true;
            error += std::isfinite(delta) ? std::abs(delta) / 15.0 : INFINITY;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0, 0};
    Simpson s{fn, max_depth};
    const double fa = s.eval(a);
    const double fb = s.eval(b);
    const double fm = s.eval(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double value = s.recurse(a, b, fa, fm, fb, whole, abs_tol, 0);
    if (s.failed || !std::isfinite(value))
        throw QuadratureError("adaptive Simpson did not converge within depth " +
                                  std::to_string(max_depth) + "; achieved error " +
                                  std::to_string(s.error),
                              s.error);
    return {value, s.error, s.evaluations};
}

RootResult bisect_newton(const std::function<double(double)>& fn,
                         const std::function<double(double)>& dfn, double lo, double hi,
                         double width_tol) {
    double flo = fn(lo);
    if (flo == 0.0) return {lo, 0, false};
    if (fn(hi) == 0.0) return {hi, 0, false};

    RootResult r;
    while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // adjacent doubles
        const double fm = fn(mid);
        ++r.iterations;
        if (fm == 0.0) return {mid, r.iterations, false};
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    r.x = 0.5 * (lo + hi);
    const double fx = fn(r.x);
    const double d = dfn(r.x);
    if (d != 0.0 && std::isfinite(d)) {
        const double cand = r.x - fx / d;
        if (cand >= lo && cand <= hi && std::abs(fn(cand)) <= std::abs(fx)) {
            r.x = cand;
            r.polished = true;
        }
    }
    return r;
}

double richardson_derivative(const std::function<double(double)>& fn, double x, double h) {
    auto central = [&](double step) { return (fn(x + step) - fn(x - step)) / (2.0 * step); };
    const double d1 = central(h), d2 = central(0.5 * h), d4 = central(0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

}  // namespace pdm::numerics
