#pragma once

#include <cstdint>
#include <random>

#include "fplan/model.hpp"

namespace fplan {

struct SmConfig {
    int num_perturbations = 1;   // Num
    double lambda_min = 0.1;
    double lambda_init = 321.0;
    double decay = 0.99;         // Lambda, in (0,1)
    int max_trials = 10;         // inner step-shrink attempts
    bool move_io = false;        // include movable I/O entries in the descent direction
};

using Rng = std::mt19937_64;

// Unbiased uniform integer in [lo, hi], stable across platforms (rejection
// sampling on the raw 64-bit stream; std::uniform_int_distribution is
// implementation-defined).
std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi);

// New decay index: uniform in [k, l_prev] when the previous index ran ahead
// of the iteration counter, else k.
long decay_index_start(long k, long l_prev, Rng& rng);

// max(lambda_min, lambda_init * decay^l)
double perturbation_step(long l, const SmConfig& config);

// Num wirelength-reducing perturbation attempts along the negative HPWL
// subgradient, each with up to max_trials step shrinks; accepts only strict
// HPWL decreases. Returns the updated decay index.
long sm_perturb(const Instance& inst, Placement& p, long k, long l_prev,
                const SmConfig& config, Rng& rng);

}  // namespace fplan
