#pragma once

#include <random>
#include <vector>

#include "pdm/models.hpp"
#include "pdm/solutions.hpp"

namespace pdm::test {

inline std::vector<double> random_points(Interval window, int n, unsigned seed = 7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(window.lo, window.hi);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = u(rng);
    return xs;
}

// One representative parameter set per family and branch.
inline std::vector<ModelFamily> catalog() {
    return {
        normalized({.family = Family::ml1, .sign = +1, .lambda = 0.1}),
        normalized({.family = Family::ml1, .sign = -1, .lambda = 0.1}),
        normalized({.family = Family::ml2, .sign = +1, .lambda = 0.1}),
        normalized({.family = Family::ml2, .sign = -1, .lambda = 0.1}),
        normalized({.family = Family::shifted_ml, .sign = +1, .lambda = 0.1, .xi = 0.3}),
        normalized({.family = Family::shifted_ml, .sign = -1, .lambda = 0.1, .xi = 1.0}),
        normalized({.family = Family::quadratic, .lambda = 0.25}),
        normalized({.family = Family::morse, .eta = 0.5, .amplitude = 0.5}),
        isotonic_with_frequency(+1, 0.1, 0.1, 1.0, 1.0),
        isotonic_with_frequency(-1, 0.1, 0.1, 1.0, 1.0),
    };
}

}  // namespace pdm::test
