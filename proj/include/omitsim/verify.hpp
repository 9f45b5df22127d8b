#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "omitsim/model.hpp"

namespace omitsim {

/// Randomized valid atom-free chain for oracle-equivalence and property
/// trials. N in [1,8]; G_m per cavity is 0 or drawn from [0.1, 2].
ChainModel random_chain_model(std::mt19937_64& rng, bool equal_omega = false);

struct VerifyReport {
    int trials = 0;
    double max_rel_dev = 0.0;           // cf vs direct, random atom-free models
    double max_rel_dev_presets = 0.0;   // reduced cf vs direct, atom presets
    double max_full_eq14_dev = 0.0;     // FullEq14 vs direct; reported only
    double max_passivity_excess = 0.0;  // max(|eps_T - 1| - 1, 0)
    double max_symmetry_defect = 0.0;   // |eps_T(-x) - conj(eps_T(x))|
    bool passed = false;
    std::string summary;
};

/// Cross-checks the continued fraction against the direct sideband solve on
/// randomized models and on the atom presets, plus the passivity and
/// conjugate-symmetry properties.
VerifyReport run_verification(int trials, std::uint64_t seed, double tol);

}  // namespace omitsim
