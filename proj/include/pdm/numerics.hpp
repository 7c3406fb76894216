#pragma once

#include <functional>

namespace pdm::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson with interval bisection and Richardson correction.
/// Throws QuadratureError (carrying the achieved error) if any panel
/// reaches `max_depth` without meeting its share of `abs_tol`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double abs_tol = 1e-10, int max_depth = 40);

struct RootResult {
    double x = 0.0;
    int iterations = 0;
    bool polished = false;
};

/// Bisection on [lo, hi] down to width `width_tol`, then one Newton step
/// using `dfn` (kept only if it stays in the bracket and reduces |fn|).
/// The caller guarantees fn(lo) and fn(hi) differ in sign.
RootResult bisect_newton(const std::function<double(double)>& fn,
                         const std::function<double(double)>& dfn, double lo, double hi,
                         double width_tol = 1e-14);

/// Central differences at h, h/2, h/4 with two Richardson steps, O(h⁶).
double richardson_derivative(const std::function<double(double)>& fn, double x, double h);

}  // namespace pdm::numerics
