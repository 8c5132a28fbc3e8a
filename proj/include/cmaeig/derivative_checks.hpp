#pragma once

// Finite-difference validation of the analytic derivatives in symfun and
// cmaop on seeded random states.

#include <cstdint>
#include <string>
#include <vector>

namespace cmaeig::checks {

struct DerivativeOptions {
    int samples = 100;
    std::uint64_t seed = 42;
    double tolerance = 1e-6;
};

struct DerivativeCheck {
    std::string tag;
    std::string description;
    int samples = 0;
    // |fd - exact| / max(|exact|, 1), worst over samples and entries. Zero for
    // the exact pattern check.
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string worst;  // where the worst error occurred
};

std::vector<DerivativeCheck> run_derivative_checks(const DerivativeOptions& opt = {});

// Scale-floored relative error used by every check above.
double fd_rel_err(double fd, double exact);

}  // namespace cmaeig::checks
