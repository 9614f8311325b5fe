#include "fplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include "fplan/initialize.hpp"

namespace fplan {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RmapConfig rmap_config_for(const Instance& inst, const SolverConfig& config) {
    RmapConfig rc;
    rc.eps_pref = config.eps_pref_rel * inst.die.diagonal();
    rc.reset_threshold = config.reset_threshold;
    rc.order = config.order;
    return rc;
}

SweepOrder make_order(const Instance& inst, const Placement& p, OrderPolicy policy) {
    return policy == OrderPolicy::PositionOrder ? position_order(inst, p)
                                                : fixed_index_order(inst);
}

void finalize(const Instance& inst, SolveResult& result) {
    result.hpwl = hpwl_total(inst, result.placement);
    result.overlap = relative_overlap_area(inst, result.placement);
    result.feasible =
        check_feasible(inst, result.placement, 1e-6 * inst.die.diagonal(), nullptr);
}

}  // namespace

std::vector<BoundarySegment> movable_io_segments(const Instance& inst) {
    std::vector<BoundarySegment> segs;
    for (int io = 0; io < inst.num_io(); ++io)
        if (!inst.io_pins[io].fixed) segs.push_back(segment_for_io(inst, io));
    return segs;
}

double relaxation(long k, double gamma_init, double gamma_growth) {
    return std::min(1.0, gamma_init * std::pow(gamma_growth, static_cast<double>(k)));
}

SolveResult per_rmap_solve(const Instance& inst, const Placement& init,
                           const SolverConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult result;
    result.config = config;
    result.placement = init;

    SmConfig sm = config.sm;
    sm.move_io = config.io_assignment;
    std::vector<BoundarySegment> segments =
        config.io_assignment ? movable_io_segments(inst) : std::vector<BoundarySegment>{};
    RmapConfig rc = rmap_config_for(inst, config);
    PreferenceState state(inst.num_modules());
    Rng rng(config.seed);

    Placement& z = result.placement;
    long l = 0;
    for (long k = 0; k < config.max_iterations; ++k) {
        auto ti = std::chrono::steady_clock::now();
        l = sm_perturb(inst, z, k, l, sm, rng);
        double hp = hpwl_total(inst, z);
        SweepOrder order = make_order(inst, z, config.order);
        double gamma = relaxation(k, config.gamma_init, config.gamma_growth);
        Placement swept = rmap_sweep(inst, z, order, state, rc, segments);
        for (size_t q = 0; q < z.z.size(); ++q)
            z.z[q] += gamma * (swept.z[q] - z.z[q]);
        // boundary membership of a movable pin is a hard constraint; a relaxed
        // step would otherwise leave it strictly inside the die
        for (const BoundarySegment& seg : segments) z = project_boundary_segment(inst, z, seg);
        double overlap = relative_overlap_area(inst, z);
        result.trace.push_back({k, hp, overlap, gamma, l, seconds_since(ti)});
        result.iterations = k + 1;
        if (overlap < config.stop_threshold) {
            result.converged = true;
            break;
        }
    }
    finalize(inst, result);
    result.global_seconds = seconds_since(t0);
    return result;
}

void post_process(const Instance& inst, SolveResult& result, const SolverConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    if (relative_overlap_area(inst, result.placement) <= config.post_overlap_tol) {
        finalize(inst, result);
        result.post_seconds = seconds_since(t0);
        return;
    }
    SmConfig sm = config.sm;
    sm.move_io = config.io_assignment;
    std::vector<BoundarySegment> segments =
        config.io_assignment ? movable_io_segments(inst) : std::vector<BoundarySegment>{};
    RmapConfig rc = rmap_config_for(inst, config);
    // near a feasible point the resetting strategy is destructive: a pair that
    // keeps resolving in the same direction gets banned and jumps across the
    // die, so the gap-closing phase runs without it
    rc.reset_threshold = kNoReset;
    PreferenceState state(inst.num_modules());
    Rng rng(config.seed + 1);

    Placement& z = result.placement;
    Placement best = z;
    double best_overlap = relative_overlap_area(inst, z);
    long l = static_cast<long>(std::floor(static_cast<double>(result.iterations) *
                                          config.eps_post));
    // Two obstacles can keep the gap-closing loop from finishing: the
    // wirelength perturbation keeps pulling modules back into overlap (its
    // step never decays below lambda_min), and exactly equidistant cells make
    // the weighted average a no-op, so a symmetric near-tiling sits at a
    // non-feasible fixed point of the preference sweep. Escalate on
    // stagnation: first drop the perturbations, then switch to the
    // hard-argmax (closest cell) sweep, which breaks ties deterministically.
    const long stall_window = 25;
    long since_best = 0;
    int stage = 0;  // 0: perturb + preference sweep, 1: sweep only, 2: closest cell
    for (long k = 0; k < config.post_max_iterations; ++k) {
        if (stage == 0) l = sm_perturb(inst, z, k, l, sm, rng);
        SweepOrder order = make_order(inst, z, config.order);
        z = stage == 2 ? map_sweep(inst, z, order, segments)
                       : rmap_sweep(inst, z, order, state, rc, segments);
        double overlap = relative_overlap_area(inst, z);
        result.post_iterations = k + 1;
        if (overlap < best_overlap) {
            best = z;
            best_overlap = overlap;
            since_best = 0;
        } else if (++since_best >= stall_window && stage < 2) {
            ++stage;
            since_best = 0;
            z = best;  // resume gap closing from the least-overlapping point seen
        }
        if (overlap <= config.post_overlap_tol) break;
    }
    if (relative_overlap_area(inst, z) > best_overlap) z = best;
    finalize(inst, result);
    result.post_seconds = seconds_since(t0);
}

SolveResult solve(const Instance& inst, const SolverConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    InitConfig ic;
    ic.area_quantile = config.key_area_quantile;
    ic.pcg_tolerance = config.pcg_tolerance;
    ic.pcg_max_iterations = static_cast<int>(config.pcg_max_iterations);
    Placement init = initialize(inst, ic);
    double init_seconds = seconds_since(t0);

    SolveResult result = per_rmap_solve(inst, init, config);
    result.init_seconds = init_seconds;
    post_process(inst, result, config);
    return result;
}

MapRunResult map_solve(const Instance& inst, const Placement& init, const SolverConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    MapRunResult res;
    res.placement = init;
    std::vector<BoundarySegment> segments =
        config.io_assignment ? movable_io_segments(inst) : std::vector<BoundarySegment>{};

    std::deque<double> window;
    const size_t window_size = 50;
    for (long k = 0; k < config.max_iterations; ++k) {
        SweepOrder order = make_order(inst, res.placement, config.order);
        res.placement = map_sweep(inst, res.placement, order, segments);
        res.overlap = relative_overlap_area(inst, res.placement);
        res.iterations = k + 1;
        if (res.overlap < config.stop_threshold) {
            res.converged = true;
            break;
        }
        window.push_back(res.overlap);
        if (window.size() > window_size) window.pop_front();
        if (window.size() == window_size) {
            auto [lo, hi] = std::minmax_element(window.begin(), window.end());
            if (*hi - *lo < 1e-6) {
                res.stalled = true;
                break;
            }
        }
    }
    res.seconds = seconds_since(t0);
    return res;
}

}  // namespace fplan
