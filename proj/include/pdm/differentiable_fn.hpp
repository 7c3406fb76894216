#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace pdm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open real interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const noexcept { return x > lo && x < hi; }
    bool empty() const noexcept { return !(lo < hi); }
    bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

    Interval intersect(const Interval& o) const noexcept {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }

    /// Shrink to at most `radius` around `center` (used for sampling unbounded domains).
    Interval clip(double center, double radius) const noexcept {
        return intersect({center - radius, center + radius});
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A scalar function of one variable together with its analytic derivative.
class DifferentiableFn {
public:
    using Fn = std::function<double(double)>;

    DifferentiableFn() = default;
    DifferentiableFn(Fn value, Fn derivative, Interval domain = {})
        : value_(std::move(value)), derivative_(std::move(derivative)), domain_(domain) {}

    static DifferentiableFn constant(double c, Interval domain = {}) {
        return {[c](double) { return c; }, [](double) { return 0.0; }, domain};
    }

    double operator()(double x) const { return value_(x); }
    double value(double x) const { return value_(x); }
    double derivative(double x) const { return derivative_(x); }
    const Interval& domain() const noexcept { return domain_; }

    explicit operator bool() const noexcept { return static_cast<bool>(value_); }

private:
    Fn value_;
    Fn derivative_;
    Interval domain_;
};

/// Pointwise product, with the product rule for the derivative.
inline DifferentiableFn operator*(const DifferentiableFn& a, const DifferentiableFn& b) {
    return {[a, b](double x) { return a(x) * b(x); },
            [a, b](double x) { return a.derivative(x) * b(x) + a(x) * b.derivative(x); },
            a.domain().intersect(b.domain())};
}

}  // namespace pdm
