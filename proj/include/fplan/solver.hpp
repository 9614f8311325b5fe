#pragma once

#include <cstdint>
#include <vector>

#include "fplan/rmap.hpp"
#include "fplan/superiorize.hpp"

namespace fplan {

struct SolverConfig {
    SmConfig sm;
    double eps_pref_rel = 0.01;      // softmax temperature as a fraction of the die diagonal
    long reset_threshold = 10;       // T (kNoReset for plain MAP behavior)
    OrderPolicy order = OrderPolicy::PositionOrder;
    double gamma_init = 0.7804;
    double gamma_growth = 1.1;       // Gamma > 1
    double eps_post = 0.35;          // decay-index reset fraction for post-processing
    double stop_threshold = 1e-3;    // relative overlap area target
    long max_iterations = 10000;
    long post_max_iterations = 20000;
    double post_overlap_tol = 1e-9;
    bool io_assignment = false;
    std::uint64_t seed = 0;
    double key_area_quantile = 0.2;  // initialization: share of modules shifted to the boundary
    long pcg_max_iterations = 2000;
    double pcg_tolerance = 1e-8;
};

struct IterationRecord {
    long k = 0;
    double hpwl = 0.0;      // after the SM sub-step
    double overlap = 0.0;   // after the projection sub-step
    double gamma = 0.0;
    long decay_index = 0;
    double sweep_seconds = 0.0;
};

struct SolveResult {
    Placement placement;
    double hpwl = 0.0;
    double overlap = 0.0;
    long iterations = 0;        // outer iterations of the global phase
    long post_iterations = 0;
    bool converged = false;     // global phase hit the overlap target
    bool feasible = false;      // check_feasible at tol 1e-6 * die diagonal
    std::vector<IterationRecord> trace;
    SolverConfig config;
    double init_seconds = 0.0;
    double global_seconds = 0.0;
    double post_seconds = 0.0;
};

double relaxation(long k, double gamma_init, double gamma_growth);

// Global floorplanning loop: SM perturbations, then a relaxed preference-
// weighted projection sweep, until the relative overlap area drops below the
// stop threshold or the iteration cap is hit.
SolveResult per_rmap_solve(const Instance& inst, const Placement& init,
                           const SolverConfig& config);

// Gap-closing rerun with full projection steps and the decay index reset to
// floor(iterations * eps_post); drives the overlap to (numerical) zero.
void post_process(const Instance& inst, SolveResult& result, const SolverConfig& config);

// initialization + global floorplanning + post-processing
SolveResult solve(const Instance& inst, const SolverConfig& config);

// Plain alternating-projection run used for comparisons; stops on the overlap
// target, on oscillation (overlap history flat over a 50-sweep window while
// still above the target), or on the iteration cap.
struct MapRunResult {
    Placement placement;
    long iterations = 0;
    double overlap = 0.0;
    bool converged = false;
    bool stalled = false;
    double seconds = 0.0;
};

MapRunResult map_solve(const Instance& inst, const Placement& init, const SolverConfig& config);

std::vector<BoundarySegment> movable_io_segments(const Instance& inst);

}  // namespace fplan
