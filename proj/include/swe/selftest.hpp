#pragma once

#include <cstdint>
#include <string>

namespace swe {

struct IdentityCheck {
    int cases = 0;
    int failures = 0;
    double max_error = 0.0;  // scaled by the stencil's L1 magnitude
};

// Randomized comparison of the closed-form increment rules with direct
// stencil evaluation (trigonometric and structured forms).
IdentityCheck check_increment_identities(int cases, std::uint64_t seed, double tol = 1e-12);

struct SelftestResult {
    std::string json;
    bool ok = false;
};

// Quick oracle suites over every module; deterministic output.
SelftestResult run_selftest(int threads = 0);

}  // namespace swe
