#include <doctest.h>

#include <cmath>
#include <random>

#include "fplan/rmap.hpp"
#include "test_util.hpp"

using namespace fplan;
using namespace fplan::testutil;

namespace {

double norm_diff(const Placement& a, const Placement& b) {
    double s = 0;
    for (size_t i = 0; i < a.z.size(); ++i) s += (a.z[i] - b.z[i]) * (a.z[i] - b.z[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("position_order ranks by x + y with index tie-break") {
    Instance inst = boxes_instance(10, 10, {{1, 1}, {1, 1}, {1, 1}});
    // keys 5, 1, 3 -> ranking (m1, m2, m0)
    Placement p = place(inst, {{2, 3}, {0.5, 0.5}, {1, 2}});
    SweepOrder order = position_order(inst, p);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == std::pair<int, int>{1, 2});
    CHECK(order[1] == std::pair<int, int>{1, 0});
    CHECK(order[2] == std::pair<int, int>{2, 0});

    // equal keys fall back to index order
    Placement eq = place(inst, {{1, 1}, {2, 0}, {0, 2}});
    SweepOrder tie = position_order(inst, eq);
    CHECK(tie[0] == std::pair<int, int>{0, 1});

    Instance two = boxes_instance(10, 10, {{1, 1}, {1, 1}});
    CHECK(position_order(two, place(two, {{9, 9}, {0, 0}})).size() == 1);
}

TEST_CASE("preference_ratio distances and reset") {
    Instance inst = boxes_instance(20, 20, {{2, 2}, {2, 2}});
    PreferenceState state(2);
    const long T = 3;

    // inside cell L: eta_L == 0 dominates
    Placement p = place(inst, {{0, 5}, {10, 5}});
    auto eta = preference_ratio(inst, p, 0, 1, state, T);
    CHECK(eta[0] == 0.0);
    for (int t = 1; t < 4; ++t) CHECK(eta[t] < 0.0);

    // a counter above T forces -inf and resets to 0
    state.counter(0, 1, CellDirection::Left) = static_cast<int>(T) + 1;
    eta = preference_ratio(inst, p, 0, 1, state, T);
    CHECK(eta[0] == -std::numeric_limits<double>::infinity());
    CHECK(state.counter(0, 1, CellDirection::Left) == 0);

    // symmetric overlap of tall modules: equidistant L/R, farther B/A
    Instance tall = boxes_instance(20, 20, {{2, 4}, {2, 4}});
    Placement sym = place(tall, {{9, 9}, {9, 9}});
    eta = preference_ratio(tall, sym, 0, 1, state, T);
    CHECK(eta[0] == doctest::Approx(eta[1]));
    CHECK(eta[2] == doctest::Approx(eta[3]));
    CHECK(eta[0] > eta[2]);
}

TEST_CASE("preference_ratio falls back when every direction is banned") {
    Instance inst = boxes_instance(20, 20, {{2, 2}, {2, 2}});
    PreferenceState state(2);
    for (int t = 0; t < 4; ++t)
        state.counter(0, 1, static_cast<CellDirection>(t)) = 11;
    Placement p = place(inst, {{9, 9}, {9, 9}});
    auto eta = preference_ratio(inst, p, 0, 1, state, 10);
    int finite = 0;
    for (double e : eta)
        if (std::isfinite(e)) ++finite;
    CHECK(finite == 4);
}

TEST_CASE("softmax_weights") {
    auto w = softmax_weights({-1, -1, -1, -1}, 1.0);
    for (double v : w) CHECK(v == doctest::Approx(0.25));

    constexpr double inf = std::numeric_limits<double>::infinity();
    w = softmax_weights({0, -inf, -inf, -inf}, 1.0);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == 0.0);
    CHECK(w[3] == 0.0);

    w = softmax_weights({0, -1, -inf, -inf}, 1.0);
    CHECK(w[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
    CHECK(w[1] == doctest::Approx(std::exp(-1.0) / (1.0 + std::exp(-1.0))));
    CHECK(w[2] == 0.0);
    CHECK(w[3] == 0.0);

    CHECK(w[0] + w[1] + w[2] + w[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(softmax_weights({-inf, -inf, -inf, -inf}, 1.0), std::invalid_argument);
}

TEST_CASE("feasible placement is an exact fixed point of the sweep") {
    Instance inst = boxes_instance(10, 10, {{2, 2}, {3, 2}, {2, 3}});
    Placement p = place(inst, {{0, 0}, {3, 0}, {7, 4}});
    REQUIRE(check_feasible(inst, p, 0.0));
    PreferenceState state(3);
    RmapConfig config{0.1, 10, OrderPolicy::PositionOrder};
    SweepOrder order = position_order(inst, p);
    Placement q = rmap_sweep(inst, p, order, state, config, {});
    CHECK(norm_diff(q, p) == 0.0);
    Placement m = map_sweep(inst, p, order, {});
    CHECK(norm_diff(m, p) == 0.0);
}

TEST_CASE("sweep matches a hand-stepped trace on one overlapping pair") {
    // two unit squares on a wide die, overlapping by 0.5 in x, same y
    Instance inst = boxes_instance(100, 100, {{1, 1}, {1, 1}});
    Placement p = place(inst, {{0, 0}, {0.5, 0}});
    const double eps = 0.35;
    PreferenceState state(2);
    RmapConfig config{eps, 10, OrderPolicy::FixedIndex};
    SweepOrder order = fixed_index_order(inst);
    Placement swept = rmap_sweep(inst, p, order, state, config, {});

    // hand-stepped: exact projections onto the four cells
    // L: splitting the 0.5 violation would push x_i to -0.25; the box pins
    //    x_i = 0, so x_j = 1, distance 0.5
    // R: x_j + 1 <= x_i with the box pinning x_j = 0, x_i = 1,
    //    distance hypot(1, 0.5)
    // B: y_i + 1 <= y_j, box pins y_i = 0, so y_j = 1, distance 1 (A symmetric)
    double dL = 0.5;
    double dR = std::sqrt(1.0 + 0.25);
    double dB = 1.0;
    double m = -dL;
    double eL = std::exp((-dL - m) / eps), eR = std::exp((-dR - m) / eps),
           eB = std::exp((-dB - m) / eps);
    double sum = eL + eR + 2 * eB;
    double wL = eL / sum, wR = eR / sum, wB = eB / sum;

    // projections per direction (x_i, x_j, y_i, y_j)
    double PL[4] = {0.0, 1.0, 0.0, 0.0};
    double PR[4] = {1.0, 0.0, 0.0, 0.0};
    double PB[4] = {0.0, 0.5, 0.0, 1.0};
    double PA[4] = {0.0, 0.5, 1.0, 0.0};
    double expect[4];
    for (int c = 0; c < 4; ++c)
        expect[c] = wL * PL[c] + wR * PR[c] + wB * PB[c] + wB * PA[c];

    CHECK(swept.x(inst, 0) == doctest::Approx(expect[0]).epsilon(1e-12));
    CHECK(swept.x(inst, 1) == doctest::Approx(expect[1]).epsilon(1e-12));
    CHECK(swept.y(inst, 0) == doctest::Approx(expect[2]).epsilon(1e-12));
    CHECK(swept.y(inst, 1) == doctest::Approx(expect[3]).epsilon(1e-12));
    (void)wR;
}

TEST_CASE("small eps and T = infinity reproduce the closest-cell MAP step") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.0, 8.0);
    Instance inst = boxes_instance(10, 10, {{2, 2}, {2, 2}});
    SweepOrder order = fixed_index_order(inst);
    for (int trial = 0; trial < 100; ++trial) {
        Placement p = place(inst, {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
        PreferenceState state(2);
        RmapConfig config{1e-9, kNoReset, OrderPolicy::FixedIndex};
        Placement r = rmap_sweep(inst, p, order, state, config, {});
        Placement m = map_sweep(inst, p, order, {});
        CHECK(norm_diff(r, m) < 1e-6);
    }
}

TEST_CASE("counter dynamics stay within bounds") {
    Instance inst = boxes_instance(4.2, 4.2, {{2, 2}, {2, 2}, {2, 2}});
    const long T = 4;
    PreferenceState state(3);
    RmapConfig config{0.05, T, OrderPolicy::PositionOrder};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(0.0, 2.2);
    Placement p = place(inst, {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
    for (int sweep = 0; sweep < 50; ++sweep) {
        SweepOrder order = position_order(inst, p);
        p = rmap_sweep(inst, p, order, state, config, {});
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                for (int t = 0; t < 4; ++t) {
                    int c = state.counter(i, j, static_cast<CellDirection>(t));
                    CHECK(c >= 0);
                    CHECK(c <= T + 1);
                }
    }
}

TEST_CASE("sweeps are deterministic") {
    Instance inst = boxes_instance(6, 6, {{2, 2}, {2, 2}, {3, 3}});
    Placement p = place(inst, {{1, 1}, {2, 2}, {0.5, 3}});
    RmapConfig config{0.05, 5, OrderPolicy::PositionOrder};

    PreferenceState s1(3), s2(3);
    Placement a = p, b = p;
    for (int sweep = 0; sweep < 10; ++sweep) {
        a = rmap_sweep(inst, a, position_order(inst, a), s1, config, {});
        b = rmap_sweep(inst, b, position_order(inst, b), s2, config, {});
    }
    CHECK(a.z == b.z);  // bit-identical
}

TEST_CASE("io segments are applied at the end of a sweep") {
    Instance inst = boxes_instance(10, 10, {{2, 2}});
    inst.io_pins.push_back({0, false, 0, 0, Side::Right});
    Placement p = make_placement(inst);
    int e = inst.io_entity(0);
    p.x(inst, e) = 4;
    p.y(inst, e) = 20;
    PreferenceState state(1);
    RmapConfig config{0.1, 10, OrderPolicy::PositionOrder};
    Placement q = rmap_sweep(inst, p, {}, state, config, {segment_for_io(inst, 0)});
    CHECK(q.x(inst, e) == 10.0);
    CHECK(q.y(inst, e) == 10.0);
}
