#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdm/models.hpp"

namespace pdm {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    int periods = 10;
    int samples_per_period = 2000;
    std::uint64_t seed = 20240611;
    bool dynamics = true;  ///< false: only the static model/map checks
};

struct VerifyReport {
    ModelFamily family;
    std::vector<CheckResult> checks;
    /// Measured quantities reported alongside the checks (period, energy, ...).
    std::vector<std::pair<std::string, double>> info;

    bool all_passed() const;
};

/// Runs the invariant suite for one catalog family: mass positivity,
/// derivative consistency, compatibility, closed-form residuals, q by
/// quadrature, inversion round trip, linearization consistency,
/// integrator-vs-closed-form, energy drift, period, picture equivalence,
/// mapping identity and (ML families) paired potentials.
VerifyReport verify_family(const ModelFamily& family, const VerifyOptions& opts = {});

}  // namespace pdm
