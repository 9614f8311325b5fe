#pragma once

#include <array>
#include <limits>

#include "fplan/model.hpp"

namespace fplan {

enum class Axis : int { X = 0, Y = 1 };

// Per-module position box: 0 <= x_i <= W - w_i, 0 <= y_i <= H - h_i.
struct BoxConstraint {
    int module = 0;
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
};

BoxConstraint box_for_module(const Instance& inst, int module);

// coord(lead) + separation <= coord(trail) on the given axis.
struct HalfSpacePair {
    int lead = 0;
    int trail = 0;
    Axis axis = Axis::X;
    double separation = 0.0;
};

enum class CellDirection : int { Left = 0, Right = 1, Below = 2, Above = 3 };

const char* cell_direction_name(CellDirection t);

// One convex piece of the pairwise non-overlap-in-die constraint: the joint
// box of modules i and j intersected with one ordering half-space.
struct ConstraintCell {
    int i = 0, j = 0;  // module indices, i < j
    CellDirection dir = CellDirection::Left;
    Axis axis = Axis::X;
    int lead = 0, trail = 0;   // half-space coord(lead) + separation <= coord(trail)
    double separation = 0.0;
    BoxConstraint box_i, box_j;
    bool empty = false;  // the two modules cannot coexist in this direction
};

ConstraintCell make_cell(const Instance& inst, int i, int j, CellDirection t);

// Boundary segment for a movable I/O pin: one coordinate pinned to a die
// edge, the other free within the die.
struct BoundarySegment {
    int io_index = 0;
    Side side = Side::Left;
    double fixed_value = 0.0;  // 0, W or H depending on side
    double free_lo = 0.0;
    double free_hi = 0.0;
};

BoundarySegment segment_for_io(const Instance& inst, int io_index);

Placement project_box(const Instance& inst, const Placement& p, const BoxConstraint& c);
Placement project_halfspace_pair(const Instance& inst, const Placement& p,
                                 const HalfSpacePair& h);
Placement project_boundary_segment(const Instance& inst, const Placement& p,
                                   const BoundarySegment& seg);

// Sparse form of the cell projection: at most the four coordinate entries of
// the pair change. distance is the Euclidean distance moved; infinity for an
// empty cell.
struct CellProjection {
    bool empty = false;
    double distance = std::numeric_limits<double>::infinity();
    std::array<int, 4> index{};    // x_i, x_j, y_i, y_j positions in z
    std::array<double, 4> value{};
};

CellProjection project_cell_sparse(const Instance& inst, const Placement& p,
                                   const ConstraintCell& cell);

// Exact Euclidean projection onto the cell. Throws std::domain_error for an
// empty cell; callers driving sweeps should test cell.empty instead.
Placement project_cell(const Instance& inst, const Placement& p, const ConstraintCell& cell);

bool placement_in_cell(const Instance& inst, const Placement& p, const ConstraintCell& cell,
                       double tol = 0.0);

}  // namespace fplan
