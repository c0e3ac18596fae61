#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zeckdist {

/// One line of the identity battery: the worst deviation seen over the
/// trials, against the pass threshold.  Fitted-constant checks report the
/// largest observed ratio instead of a deviation.
struct identity_check {
    std::string name;
    std::size_t trials = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct verify_options {
    std::uint64_t seed = 1;
    std::size_t trials = 10'000;
    double exact_tol = 1e-12;           ///< algebraically exact entry identities
    double frame_tol = 1e-13;           ///< eigenframe identities
    double nilpotent_tol = 1e-30;       ///< structurally zero product
    double reconstruction_tol = 1e-9;   ///< factored vs direct paired product
    bool corrupt_frame = false;         ///< negative-control hook
};

/// Randomized identity battery over the transfer-matrix algebra: frame
/// identities, nilpotency, the exact (1,1) entries, block factorization,
/// product reconstruction, and the quadratic remainder ratios.
/// Deterministic for a fixed seed.
std::vector<identity_check> run_identity_battery(const verify_options& opts = {});

}  // namespace zeckdist
