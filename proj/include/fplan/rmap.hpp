#pragma once

#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "fplan/projections.hpp"

namespace fplan {

inline constexpr long kNoReset = std::numeric_limits<long>::max();

enum class OrderPolicy { PositionOrder, FixedIndex };

struct RmapConfig {
    double eps_pref = 0.0;          // softmax temperature, absolute length units
    long reset_threshold = 10;      // T; kNoReset disables resetting (plain MAP-style)
    OrderPolicy order = OrderPolicy::PositionOrder;
};

// Consecutive-dominance counters of the resetting strategy, one per
// (unordered pair, direction).
class PreferenceState {
public:
    explicit PreferenceState(int n_modules);

    int& counter(int i, int j, CellDirection t);
    int counter(int i, int j, CellDirection t) const;
    int pair_count() const { return static_cast<int>(counters_.size()); }

private:
    int n_;
    std::vector<std::array<int, 4>> counters_;
    int pair_index(int i, int j) const;
};

using SweepOrder = std::vector<std::pair<int, int>>;

// Pairs enumerated lexicographically over the module ranking by x + y
// ascending (index breaks ties); deterministic for a given placement.
SweepOrder position_order(const Instance& inst, const Placement& p);
SweepOrder fixed_index_order(const Instance& inst);

// Preference ratios (eta_L, eta_R, eta_B, eta_A) for one pair. Empty cells
// get -inf without bookkeeping; a counter found above the threshold yields
// -inf and resets to zero; otherwise eta is minus the distance to the cell.
// If every direction came back -inf the distances are restored for the
// non-empty cells so the sweep can still make progress.
std::array<double, 4> preference_ratio(const Instance& inst, const Placement& p, int i, int j,
                                       PreferenceState& state, long reset_threshold);

// Numerically stable softmax; -inf maps to an exact zero weight. At least
// one input must be finite.
std::array<double, 4> softmax_weights(const std::array<double, 4>& eta, double eps_pref);

// One pass of generalized projections with preference weights over all pairs
// in order, then the movable I/O boundary projections.
Placement rmap_sweep(const Instance& inst, const Placement& p, const SweepOrder& order,
                     PreferenceState& state, const RmapConfig& config,
                     const std::vector<BoundarySegment>& io_segments);

// Classic alternating projection: each pair projected onto its closest
// non-empty cell (ties broken L, R, B, A).
Placement map_sweep(const Instance& inst, const Placement& p, const SweepOrder& order,
                    const std::vector<BoundarySegment>& io_segments);

}  // namespace fplan
