#include "fplan/superiorize.hpp"

#include <cmath>
#include <limits>

namespace fplan {

std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t range = hi - lo + 1;  // hi >= lo; range 0 means the full 2^64 span
    if (range == 0) return rng();
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return lo + draw % range;
}

long decay_index_start(long k, long l_prev, Rng& rng) {
    if (k < l_prev)
        return static_cast<long>(uniform_int(rng, static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(l_prev)));
    return k;
}

double perturbation_step(long l, const SmConfig& config) {
    return std::max(config.lambda_min,
                    config.lambda_init * std::pow(config.decay, static_cast<double>(l)));
}

long sm_perturb(const Instance& inst, Placement& p, long k, long l_prev,
                const SmConfig& config, Rng& rng) {
    long l = l_prev;
    int n_m = inst.num_modules();
    int n = inst.num_entities();
    for (int attempt = 0; attempt < config.num_perturbations; ++attempt) {
        l = decay_index_start(k, l, rng);
        std::vector<double> v = hpwl_subgradient(inst, p);
        if (!config.move_io) {
            for (int e = n_m; e < n; ++e) {
                v[inst.x_index(e)] = 0.0;
                v[inst.y_index(e)] = 0.0;
            }
        }
        double norm2 = 0.0;
        for (double g : v) norm2 += g * g;
        if (norm2 == 0.0) continue;
        double norm = std::sqrt(norm2);

        double base = hpwl_total(inst, p);
        Placement trial = p;
        for (int cnt = 0; cnt < config.max_trials; ++cnt) {
            double lambda = perturbation_step(l, config);
            for (size_t q = 0; q < v.size(); ++q)
                trial.z[q] = p.z[q] - lambda * v[q] / norm;
            if (hpwl_total(inst, trial) < base) {
                p = trial;
                break;
            }
            l += 1;
        }
    }
    return l;
}

}  // namespace fplan
