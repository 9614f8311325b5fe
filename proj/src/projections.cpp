#include "fplan/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fplan {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

const char* cell_direction_name(CellDirection t) {
    switch (t) {
        case CellDirection::Left: return "L";
        case CellDirection::Right: return "R";
        case CellDirection::Below: return "B";
        case CellDirection::Above: return "A";
    }
    return "?";
}

BoxConstraint box_for_module(const Instance& inst, int module) {
    const ModuleSpec& m = inst.modules[module];
    return {module, 0.0, inst.die.width - m.width, 0.0, inst.die.height - m.height};
}

ConstraintCell make_cell(const Instance& inst, int i, int j, CellDirection t) {
    ConstraintCell c;
    c.i = i;
    c.j = j;
    c.dir = t;
    c.box_i = box_for_module(inst, i);
    c.box_j = box_for_module(inst, j);
    switch (t) {
        case CellDirection::Left:   // x_i + w_i <= x_j
            c.axis = Axis::X;
            c.lead = i;
            c.trail = j;
            c.separation = inst.modules[i].width;
            break;
        case CellDirection::Right:  // x_j + w_j <= x_i
            c.axis = Axis::X;
            c.lead = j;
            c.trail = i;
            c.separation = inst.modules[j].width;
            break;
        case CellDirection::Below:  // y_i + h_i <= y_j
            c.axis = Axis::Y;
            c.lead = i;
            c.trail = j;
            c.separation = inst.modules[i].height;
            break;
        case CellDirection::Above:  // y_j + h_j <= y_i
            c.axis = Axis::Y;
            c.lead = j;
            c.trail = i;
            c.separation = inst.modules[j].height;
            break;
    }
    // Interval available to the lead coordinate once the half-space is tight.
    const BoxConstraint& bl = c.lead == i ? c.box_i : c.box_j;
    const BoxConstraint& bt = c.lead == i ? c.box_j : c.box_i;
    double lo = c.axis == Axis::X ? std::max(bl.x_lo, bt.x_lo - c.separation)
                                  : std::max(bl.y_lo, bt.y_lo - c.separation);
    double hi = c.axis == Axis::X ? std::min(bl.x_hi, bt.x_hi - c.separation)
                                  : std::min(bl.y_hi, bt.y_hi - c.separation);
    c.empty = lo > hi;
    return c;
}

BoundarySegment segment_for_io(const Instance& inst, int io_index) {
    const IoPinSpec& io = inst.io_pins[io_index];
    BoundarySegment s;
    s.io_index = io_index;
    s.side = io.side;
    switch (io.side) {
        case Side::Left:
            s.fixed_value = 0.0;
            s.free_hi = inst.die.height;
            break;
        case Side::Right:
            s.fixed_value = inst.die.width;
            s.free_hi = inst.die.height;
            break;
        case Side::Bottom:
            s.fixed_value = 0.0;
            s.free_hi = inst.die.width;
            break;
        case Side::Top:
            s.fixed_value = inst.die.height;
            s.free_hi = inst.die.width;
            break;
    }
    return s;
}

Placement project_box(const Instance& inst, const Placement& p, const BoxConstraint& c) {
    Placement out = p;
    out.x(inst, c.module) = clamp(out.x(inst, c.module), c.x_lo, c.x_hi);
    out.y(inst, c.module) = clamp(out.y(inst, c.module), c.y_lo, c.y_hi);
    return out;
}

Placement project_halfspace_pair(const Instance& inst, const Placement& p,
                                 const HalfSpacePair& h) {
    Placement out = p;
    int il = h.axis == Axis::X ? inst.x_index(h.lead) : inst.y_index(h.lead);
    int it = h.axis == Axis::X ? inst.x_index(h.trail) : inst.y_index(h.trail);
    double v = out.z[il] + h.separation - out.z[it];
    if (v > 0.0) {
        out.z[il] -= v / 2.0;
        out.z[it] += v / 2.0;
    }
    return out;
}

Placement project_boundary_segment(const Instance& inst, const Placement& p,
                                   const BoundarySegment& seg) {
    Placement out = p;
    int e = inst.io_entity(seg.io_index);
    if (seg.side == Side::Left || seg.side == Side::Right) {
        out.x(inst, e) = seg.fixed_value;
        out.y(inst, e) = clamp(out.y(inst, e), seg.free_lo, seg.free_hi);
    } else {
        out.y(inst, e) = seg.fixed_value;
        out.x(inst, e) = clamp(out.x(inst, e), seg.free_lo, seg.free_hi);
    }
    return out;
}

CellProjection project_cell_sparse(const Instance& inst, const Placement& p,
                                   const ConstraintCell& cell) {
    CellProjection out;
    out.index = {inst.x_index(cell.i), inst.x_index(cell.j),
                 inst.y_index(cell.i), inst.y_index(cell.j)};
    if (cell.empty) {
        out.empty = true;
        return out;
    }
    double xi = p.z[out.index[0]], xj = p.z[out.index[1]];
    double yi = p.z[out.index[2]], yj = p.z[out.index[3]];

    double nxi = xi, nxj = xj, nyi = yi, nyj = yj;
    if (cell.axis == Axis::X) {
        nyi = clamp(yi, cell.box_i.y_lo, cell.box_i.y_hi);
        nyj = clamp(yj, cell.box_j.y_lo, cell.box_j.y_hi);
    } else {
        nxi = clamp(xi, cell.box_i.x_lo, cell.box_i.x_hi);
        nxj = clamp(xj, cell.box_j.x_lo, cell.box_j.x_hi);
    }

    // On-axis pair (u, v) with u + s <= v inside the two box intervals. If
    // the plain box clamp satisfies the half-space it is the projection;
    // otherwise the half-space is tight and the problem is 1-D in u.
    const BoxConstraint& bl = cell.lead == cell.i ? cell.box_i : cell.box_j;
    const BoxConstraint& bt = cell.lead == cell.i ? cell.box_j : cell.box_i;
    double u, v, lu, uu, lv, uv;
    if (cell.axis == Axis::X) {
        u = cell.lead == cell.i ? xi : xj;
        v = cell.trail == cell.i ? xi : xj;
        lu = bl.x_lo; uu = bl.x_hi;
        lv = bt.x_lo; uv = bt.x_hi;
    } else {
        u = cell.lead == cell.i ? yi : yj;
        v = cell.trail == cell.i ? yi : yj;
        lu = bl.y_lo; uu = bl.y_hi;
        lv = bt.y_lo; uv = bt.y_hi;
    }
    double cu = clamp(u, lu, uu);
    double cv = clamp(v, lv, uv);
    if (cu + cell.separation > cv) {
        cu = clamp((u + v - cell.separation) / 2.0,
                   std::max(lu, lv - cell.separation),
                   std::min(uu, uv - cell.separation));
        cv = cu + cell.separation;
    }
    if (cell.axis == Axis::X) {
        nxi = cell.lead == cell.i ? cu : cv;
        nxj = cell.lead == cell.j ? cu : cv;
    } else {
        nyi = cell.lead == cell.i ? cu : cv;
        nyj = cell.lead == cell.j ? cu : cv;
    }

    out.value = {nxi, nxj, nyi, nyj};
    out.distance = std::sqrt((nxi - xi) * (nxi - xi) + (nxj - xj) * (nxj - xj) +
                             (nyi - yi) * (nyi - yi) + (nyj - yj) * (nyj - yj));
    return out;
}

Placement project_cell(const Instance& inst, const Placement& p, const ConstraintCell& cell) {
    CellProjection cp = project_cell_sparse(inst, p, cell);
    if (cp.empty)
        throw std::domain_error("projection onto an empty constraint cell");
    Placement out = p;
    for (int k = 0; k < 4; ++k) out.z[cp.index[k]] = cp.value[k];
    return out;
}

bool placement_in_cell(const Instance& inst, const Placement& p, const ConstraintCell& cell,
                       double tol) {
    if (cell.empty) return false;
    double xi = p.x(inst, cell.i), xj = p.x(inst, cell.j);
    double yi = p.y(inst, cell.i), yj = p.y(inst, cell.j);
    if (xi < cell.box_i.x_lo - tol || xi > cell.box_i.x_hi + tol) return false;
    if (yi < cell.box_i.y_lo - tol || yi > cell.box_i.y_hi + tol) return false;
    if (xj < cell.box_j.x_lo - tol || xj > cell.box_j.x_hi + tol) return false;
    if (yj < cell.box_j.y_lo - tol || yj > cell.box_j.y_hi + tol) return false;
    double lead = cell.axis == Axis::X ? p.x(inst, cell.lead) : p.y(inst, cell.lead);
    double trail = cell.axis == Axis::X ? p.x(inst, cell.trail) : p.y(inst, cell.trail);
    return lead + cell.separation <= trail + tol;
}

}  // namespace fplan
