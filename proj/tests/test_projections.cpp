#include <doctest.h>

#include <cmath>
#include <random>

#include "fplan/projections.hpp"
#include "qp_oracle.hpp"
#include "test_util.hpp"

using namespace fplan;
using namespace fplan::testutil;

namespace {

double norm_diff(const Placement& a, const Placement& b) {
    double s = 0;
    for (size_t i = 0; i < a.z.size(); ++i) s += (a.z[i] - b.z[i]) * (a.z[i] - b.z[i]);
    return std::sqrt(s);
}

// qp_oracle formulation of a cell over the pair's four coordinates
// (x_i, x_j, y_i, y_j).
std::vector<double> cell_oracle(const Instance& inst, const Placement& p,
                                const ConstraintCell& cell) {
    std::vector<double> point = {p.x(inst, cell.i), p.x(inst, cell.j), p.y(inst, cell.i),
                                 p.y(inst, cell.j)};
    std::vector<LinearInequality> cons;
    auto bound = [&](int var, double lo, double hi) {
        LinearInequality up{{0, 0, 0, 0}, hi};
        up.a[var] = 1;
        cons.push_back(up);
        LinearInequality dn{{0, 0, 0, 0}, -lo};
        dn.a[var] = -1;
        cons.push_back(dn);
    };
    bound(0, cell.box_i.x_lo, cell.box_i.x_hi);
    bound(1, cell.box_j.x_lo, cell.box_j.x_hi);
    // only the on-axis variables carry the half-space; keep the constraint
    // count at six by folding the off-axis bounds in a second oracle call
    LinearInequality hs{{0, 0, 0, 0}, -cell.separation};
    int lead_var, trail_var;
    if (cell.axis == Axis::X) {
        lead_var = cell.lead == cell.i ? 0 : 1;
        trail_var = cell.trail == cell.i ? 0 : 1;
    } else {
        lead_var = cell.lead == cell.i ? 2 : 3;
        trail_var = cell.trail == cell.i ? 2 : 3;
    }
    hs.a[lead_var] = 1;
    hs.a[trail_var] = -1;

    // x block with half-space if it is the x axis
    std::vector<LinearInequality> xcons(cons.begin(), cons.begin() + 4);
    cons.clear();
    bound(0, cell.box_i.y_lo, cell.box_i.y_hi);
    bound(1, cell.box_j.y_lo, cell.box_j.y_hi);
    std::vector<LinearInequality> ycons = cons;
    for (auto& c : ycons) {
        c.a = {0, 0, c.a[0], c.a[1]};
    }
    if (cell.axis == Axis::X)
        xcons.push_back(hs);
    else
        ycons.push_back(hs);

    std::vector<double> xy = qp_oracle({point[0], point[1]},
                                       [&] {
                                           std::vector<LinearInequality> two;
                                           for (const auto& c : xcons)
                                               two.push_back({{c.a[0], c.a[1]}, c.b});
                                           return two;
                                       }());
    std::vector<double> yv = qp_oracle({point[2], point[3]},
                                       [&] {
                                           std::vector<LinearInequality> two;
                                           for (const auto& c : ycons)
                                               two.push_back({{c.a[2], c.a[3]}, c.b});
                                           return two;
                                       }());
    return {xy[0], xy[1], yv[0], yv[1]};
}

}  // namespace

TEST_CASE("qp_oracle basics") {
    CHECK(qp_oracle({3.0}, {}) == std::vector<double>{3.0});
    auto r = qp_oracle({3.0}, {{{1.0}, 0.0}});
    CHECK(r[0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(qp_oracle({0.0}, {{{1.0}, -1.0}, {{-1.0}, -1.0}}), std::domain_error);
}

TEST_CASE("project_box clamps only the target module") {
    Instance inst = boxes_instance(8, 8, {{2, 2}, {2, 2}});
    BoxConstraint box = box_for_module(inst, 0);
    CHECK(box.x_hi == doctest::Approx(6.0));

    Placement p = place(inst, {{-1, 3}, {7.5, -2}});
    Placement q = project_box(inst, p, box);
    CHECK(q.x(inst, 0) == 0.0);
    CHECK(q.y(inst, 0) == 3.0);
    CHECK(q.x(inst, 1) == 7.5);  // untouched
    CHECK(q.y(inst, 1) == -2.0);

    Placement inside = place(inst, {{2, 2}, {0, 0}});
    CHECK(norm_diff(project_box(inst, inside, box), inside) == 0.0);

    Placement far = place(inst, {{9, 3}, {0, 0}});
    Placement proj = project_box(inst, far, box);
    CHECK(proj.x(inst, 0) == 6.0);
    CHECK(norm_diff(proj, far) == doctest::Approx(3.0));
}

TEST_CASE("project_halfspace_pair splits the violation") {
    Instance inst = boxes_instance(20, 20, {{4, 2}, {3, 2}});
    HalfSpacePair h{0, 1, Axis::X, 4.0};

    Placement p = place(inst, {{5, 0}, {7, 0}});
    Placement q = project_halfspace_pair(inst, p, h);
    CHECK(q.x(inst, 0) == doctest::Approx(4.0));
    CHECK(q.x(inst, 1) == doctest::Approx(8.0));
    // matches the oracle on the two active coordinates
    auto o = qp_oracle({5.0, 7.0}, {{{1.0, -1.0}, -4.0}});
    CHECK(o[0] == doctest::Approx(4.0));
    CHECK(o[1] == doctest::Approx(8.0));

    Placement sat = place(inst, {{0, 0}, {9, 0}});
    CHECK(norm_diff(project_halfspace_pair(inst, sat, h), sat) == 0.0);
    Placement tight = place(inst, {{0, 0}, {4, 0}});
    CHECK(norm_diff(project_halfspace_pair(inst, tight, h), tight) == 0.0);
}

TEST_CASE("project_cell hand cases") {
    // two 2-wide modules on an 8+2 die so the x-interval is [0,8]
    Instance inst = boxes_instance(10, 10, {{2, 10}, {2, 10}});
    ConstraintCell left = make_cell(inst, 0, 1, CellDirection::Left);
    REQUIRE_FALSE(left.empty);

    Placement p = place(inst, {{5, 0}, {5, 0}});
    Placement q = project_cell(inst, p, left);
    CHECK(q.x(inst, 0) == doctest::Approx(4.0));
    CHECK(q.x(inst, 1) == doctest::Approx(6.0));

    CHECK(norm_diff(project_cell(inst, q, left), q) == 0.0);  // idempotent
}

TEST_CASE("project_cell pins against the box") {
    Instance inst = boxes_instance(12, 12, {{4, 12}, {4, 12}});  // x-intervals [0,8]
    ConstraintCell left = make_cell(inst, 0, 1, CellDirection::Left);
    Placement p = place(inst, {{7, 0}, {7, 0}});
    Placement q = project_cell(inst, p, left);
    CHECK(q.x(inst, 1) == doctest::Approx(8.0));
    CHECK(q.x(inst, 0) == doctest::Approx(4.0));
}

TEST_CASE("empty cell detection") {
    Instance inst = boxes_instance(10, 10, {{6, 6}, {6, 6}});
    // 6 + 6 > 10: the modules cannot sit side by side in either axis
    for (int t = 0; t < 4; ++t) {
        ConstraintCell cell = make_cell(inst, 0, 1, static_cast<CellDirection>(t));
        CHECK(cell.empty);
        Placement p = place(inst, {{0, 0}, {1, 1}});
        CHECK_THROWS_AS(project_cell(inst, p, cell), std::domain_error);
    }
    Instance ok = boxes_instance(10, 10, {{6, 4}, {6, 4}});
    CHECK(make_cell(ok, 0, 1, CellDirection::Left).empty);
    CHECK(make_cell(ok, 0, 1, CellDirection::Right).empty);
    CHECK_FALSE(make_cell(ok, 0, 1, CellDirection::Below).empty);
    CHECK_FALSE(make_cell(ok, 0, 1, CellDirection::Above).empty);
}

TEST_CASE("project_boundary_segment") {
    Instance inst = boxes_instance(10, 10, {{1, 1}});
    inst.io_pins.push_back({0, false, 0, 0, Side::Left});
    BoundarySegment seg = segment_for_io(inst, 0);

    Placement p = make_placement(inst);
    int e = inst.io_entity(0);
    p.x(inst, e) = 3;
    p.y(inst, e) = 5;
    Placement q = project_boundary_segment(inst, p, seg);
    CHECK(q.x(inst, e) == 0.0);
    CHECK(q.y(inst, e) == 5.0);

    p.x(inst, e) = -2;
    p.y(inst, e) = 12;
    q = project_boundary_segment(inst, p, seg);
    CHECK(q.x(inst, e) == 0.0);
    CHECK(q.y(inst, e) == 10.0);

    CHECK(norm_diff(project_boundary_segment(inst, q, seg), q) == 0.0);
}

TEST_CASE("project_cell equals the active-set oracle on random subproblems") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> size(0.5, 5.0), pos(-4.0, 14.0);
    for (int trial = 0; trial < 2000; ++trial) {
        Instance inst = boxes_instance(10, 10, {{size(rng), size(rng)}, {size(rng), size(rng)}});
        ConstraintCell cell =
            make_cell(inst, 0, 1, static_cast<CellDirection>(trial % 4));
        if (cell.empty) continue;
        Placement p = place(inst, {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
        Placement q = project_cell(inst, p, cell);
        auto oracle = cell_oracle(inst, p, cell);
        CHECK(q.x(inst, 0) == doctest::Approx(oracle[0]).epsilon(1e-9));
        CHECK(q.x(inst, 1) == doctest::Approx(oracle[1]).epsilon(1e-9));
        CHECK(q.y(inst, 0) == doctest::Approx(oracle[2]).epsilon(1e-9));
        CHECK(q.y(inst, 1) == doctest::Approx(oracle[3]).epsilon(1e-9));
    }
}

TEST_CASE("projector properties: idempotence, non-expansiveness, membership, optimality") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> size(0.5, 4.0), pos(-5.0, 15.0), unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        Instance inst = boxes_instance(10, 10, {{size(rng), size(rng)}, {size(rng), size(rng)}});
        ConstraintCell cell = make_cell(inst, 0, 1, static_cast<CellDirection>(trial % 4));
        if (cell.empty) continue;

        Placement z1 = place(inst, {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
        Placement z2 = place(inst, {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
        Placement p1 = project_cell(inst, z1, cell);
        Placement p2 = project_cell(inst, z2, cell);

        CHECK(norm_diff(project_cell(inst, p1, cell), p1) <= 1e-12 * (1 + norm_diff(p1, z1)));
        CHECK(norm_diff(p1, p2) <= norm_diff(z1, z2) + 1e-12);
        CHECK(placement_in_cell(inst, p1, cell, 1e-9));

        // optimality against random feasible points
        for (int c = 0; c < 10; ++c) {
            Placement feas = make_placement(inst);
            // random point of the cell: lead coordinate in its tight interval
            double lu = cell.axis == Axis::X
                            ? (cell.lead == cell.i ? cell.box_i.x_lo : cell.box_j.x_lo)
                            : (cell.lead == cell.i ? cell.box_i.y_lo : cell.box_j.y_lo);
            double uu = cell.axis == Axis::X
                            ? (cell.lead == cell.i ? cell.box_i.x_hi : cell.box_j.x_hi)
                            : (cell.lead == cell.i ? cell.box_i.y_hi : cell.box_j.y_hi);
            double lv = cell.axis == Axis::X
                            ? (cell.trail == cell.i ? cell.box_i.x_lo : cell.box_j.x_lo)
                            : (cell.trail == cell.i ? cell.box_i.y_lo : cell.box_j.y_lo);
            double uv = cell.axis == Axis::X
                            ? (cell.trail == cell.i ? cell.box_i.x_hi : cell.box_j.x_hi)
                            : (cell.trail == cell.i ? cell.box_i.y_hi : cell.box_j.y_hi);
            double lead_lo = std::max(lu, lv - cell.separation);
            double lead_hi = std::min(uu, uv - cell.separation);
            double lead = lead_lo + unit(rng) * (lead_hi - lead_lo);
            double trail_lo = std::max(lv, lead + cell.separation);
            double trail = trail_lo + unit(rng) * (uv - trail_lo);
            auto set_axis = [&](int entity, double v) {
                if (cell.axis == Axis::X)
                    feas.x(inst, entity) = v;
                else
                    feas.y(inst, entity) = v;
            };
            set_axis(cell.lead, lead);
            set_axis(cell.trail, trail);
            auto set_off = [&](int entity, const BoxConstraint& b) {
                if (cell.axis == Axis::X)
                    feas.y(inst, entity) = b.y_lo + unit(rng) * (b.y_hi - b.y_lo);
                else
                    feas.x(inst, entity) = b.x_lo + unit(rng) * (b.x_hi - b.x_lo);
            };
            set_off(cell.i, cell.box_i);
            set_off(cell.j, cell.box_j);
            REQUIRE(placement_in_cell(inst, feas, cell, 1e-9));
            CHECK(norm_diff(z1, p1) <= norm_diff(z1, feas) + 1e-9);
        }
    }
}
