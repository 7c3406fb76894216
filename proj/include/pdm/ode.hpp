#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "pdm/errors.hpp"

namespace pdm::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  ///< 0 selects the starting step automatically
    double h_min = 1e-14;
    double h_max = kNoLimit;
    long max_steps = 50'000'000;

    static constexpr double kNoLimit = 1e300;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double last_step = 0.0;
};

/// Dormand-Prince 5(4) with PI step-size control (Hairer's DOPRI5
/// constants), local extrapolation and the method's fourth-order dense
/// output (cubic Hermite plus a quartic stage correction).
///
/// `rhs(t, y, dy)` evaluates the vector field. `valid(y)` reports whether
/// a state lies in the admissible region; stage states outside it force a
/// step rejection, and an accepted state outside it is impossible by
/// construction. If the step has to shrink below `h_min` because of
/// `valid`, DomainEscape is thrown, otherwise StepUnderflow.
///
/// `sample(t, y, dydt)` is called once per entry of `out_times`, in order.
/// `dydt` is the derivative of the interpolant (exact vector field at
/// step endpoints). `out_times` must be sorted and lie in [t0, t_end].
template <std::size_t N>
class DormandPrince45 {
public:
    using State = std::array<double, N>;

    explicit DormandPrince45(Options opts = {}) : opts_(opts) {}

    template <class Rhs, class Valid, class Sample>
    Stats integrate(Rhs&& rhs, Valid&& valid, double t0, const State& y0, double t_end,
                    std::span<const double> out_times, Sample&& sample) const {
        Stats stats;
        std::size_t next = 0;
        State y = y0, dy{};
        rhs(t0, y, dy);
        ++stats.rhs_evaluations;
        while (next < out_times.size() && out_times[next] <= t0) sample(out_times[next++], y, dy);
        if (!(t_end > t0)) return stats;

        double h = opts_.h_init > 0 ? opts_.h_init : initial_step(rhs, valid, t0, y, dy, t_end, stats);
        double t = t0;
        double facold = 1e-4;
        bool last_rejected = false;
        std::array<State, 7> k;
        k[0] = dy;

        while (t < t_end) {
            if (stats.accepted + stats.rejected >= opts_.max_steps)
                throw Error("max_steps_exceeded", "integrator exceeded the step budget");
            h = std::min({h, opts_.h_max, t_end - t});
            if (t_end - (t + h) < 1e-10 * h) h = t_end - t;

            State y_new{}, err{};
            const bool stages_ok = step(rhs, valid, t, y, h, k, y_new, err, stats);
            if (!stages_ok) {
                h *= 0.25;
                ++stats.rejected;
                last_rejected = true;
                if (h < opts_.h_min)
                    throw DomainEscape("trajectory approaches a singular endpoint of the domain", t);
                continue;
            }

            double e = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                e += (err[i] / sc) * (err[i] / sc);
            }
            e = std::sqrt(e / N);
            if (!std::isfinite(e)) e = 1e10;

            const double fac11 = std::pow(e, kExpo1);
            if (e <= 1.0) {
                double fac = fac11 / std::pow(facold, kBeta);
                fac = std::clamp(fac / kSafe, kFacMin, kFacMax);
                double h_new = h / fac;
                if (last_rejected) h_new = std::min(h_new, h);
                facold = std::max(e, 1e-4);

                const double t_new = (h == t_end - t) ? t_end : t + h;
                // k[6] holds f(t+h, y_new) (FSAL)
                while (next < out_times.size() && out_times[next] <= t_new) {
                    emit(out_times[next++], t, h, y, k, y_new, sample);
                }
                y = y_new;
                k[0] = k[6];
                t = t_new;
                ++stats.accepted;
                stats.last_step = h;
                last_rejected = false;
                h = h_new;
            } else {
                h = h / std::min(kFacMax, fac11 / kSafe);
                ++stats.rejected;
                last_rejected = true;
            }
            if (h < opts_.h_min && t < t_end) throw StepUnderflow("required step below h_min", t);
        }
        while (next < out_times.size()) sample(out_times[next++], y, k[0]);
        return stats;
    }

private:
    static constexpr double kBeta = 0.04;
    static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    static constexpr double kSafe = 0.9;
    static constexpr double kFacMin = 0.1;  // h grows at most 10x
    static constexpr double kFacMax = 5.0;  // h shrinks at most 5x

    template <class Rhs, class Valid>
    bool step(Rhs& rhs, Valid& valid, double t, const State& y, double h, std::array<State, 7>& k,
              State& y_new, State& err, Stats& stats) const {
        static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
        static constexpr double a[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static constexpr double e[7] = {71.0 / 57600,     0,           -71.0 / 16695, 71.0 / 1920,
                                        -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
        State ys;
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += a[s][j] * k[j][i];
                ys[i] = y[i] + h * acc;
            }
            if (!valid(ys)) return false;
            rhs(t + c[s] * h, ys, k[s]);
            ++stats.rhs_evaluations;
        }
        y_new = ys;  // stage 7 abscissa is the 5th-order solution
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 7; ++j) acc += e[j] * k[j][i];
            err[i] = h * acc;
        }
        return true;
    }

    // Continuous extension of DOPRI5: the cubic Hermite interpolant of the
    // step plus one quartic correction built from the stages. Fourth-order
    // accurate, so sampled values carry no more error than the steps.
    template <class Sample>
    static void emit(double ts, double t, double h, const State& y0, const std::array<State, 7>& k,
                     const State& y1, Sample& sample) {
        static constexpr double d[7] = {-12715105075.0 / 11282082432.0, 0.0,
                                        87487479700.0 / 32700410799.0,   -10690763975.0 / 1880347072.0,
                                        701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
                                        69997945.0 / 29380423.0};
        if (ts == t + h) {
            sample(ts, y1, k[6]);
            return;
        }
        const double th = (ts - t) / h, u = 1.0 - th;
        State y{}, dy{};
        for (std::size_t i = 0; i < N; ++i) {
            const double r2 = y1[i] - y0[i];
            const double r3 = h * k[0][i] - r2;
            const double r4 = r2 - h * k[6][i] - r3;
            double r5 = 0.0;
            for (int j = 0; j < 7; ++j) r5 += d[j] * k[j][i];
            r5 *= h;
            const double p = r3 + th * (r4 + u * r5);
            const double dp = r4 + (1.0 - 2.0 * th) * r5;
            const double q = r2 + u * p;
            const double dq = -p + u * dp;
            y[i] = y0[i] + th * q;
            dy[i] = (q + th * dq) / h;
        }
        sample(ts, y, dy);
    }

    template <class Rhs, class Valid>
    double initial_step(Rhs& rhs, Valid& valid, double t0, const State& y0, const State& f0, double t_end,
                        Stats& stats) const {
        auto norm = [&](const State& v) {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = opts_.atol + opts_.rtol * std::abs(y0[i]);
                s += (v[i] / sc) * (v[i] / sc);
            }
            return std::sqrt(s / N);
        };
        const double d0 = norm(y0), d1 = norm(f0);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_end - t0);
        State y1, f1;
        for (int tries = 0;; ++tries) {
            for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
            if (valid(y1) || tries > 60) break;
            h0 *= 0.1;
        }
        rhs(t0 + h0, y1, f1);
        ++stats.rhs_evaluations;
        State df;
        for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
        const double d2 = norm(df) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
        return std::min({100 * h0, h1, t_end - t0});
    }

    Options opts_;
};

}  // namespace pdm::ode
