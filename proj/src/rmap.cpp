#include "fplan/rmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PairWork {
    std::array<ConstraintCell, 4> cells;
    std::array<CellProjection, 4> projs;
    double best = kInf;
};

PairWork pair_work(const Instance& inst, const Placement& p, int i, int j) {
    PairWork w;
    for (int t = 0; t < 4; ++t) {
        w.cells[t] = make_cell(inst, i, j, static_cast<CellDirection>(t));
        w.projs[t] = project_cell_sparse(inst, p, w.cells[t]);
        if (!w.projs[t].empty) w.best = std::min(w.best, w.projs[t].distance);
    }
    return w;
}

std::array<double, 4> ratios_from(const PairWork& w, PreferenceState& state, int i, int j,
                                  long reset_threshold) {
    std::array<double, 4> eta;
    bool any = false;
    for (int t = 0; t < 4; ++t) {
        auto dir = static_cast<CellDirection>(t);
        if (w.projs[t].empty) {
            eta[t] = -kInf;
            continue;
        }
        int& c = state.counter(i, j, dir);
        if (c > reset_threshold) {
            eta[t] = -kInf;
            c = 0;
        } else {
            eta[t] = -w.projs[t].distance;
            any = true;
        }
    }
    if (!any) {
        // every direction was banned this call; fall back to plain closest-point
        // ratios so the sweep keeps moving
        for (int t = 0; t < 4; ++t)
            if (!w.projs[t].empty) eta[t] = -w.projs[t].distance;
    }
    return eta;
}

}  // namespace

PreferenceState::PreferenceState(int n_modules) : n_(n_modules) {
    int pairs = n_modules * (n_modules - 1) / 2;
    counters_.assign(static_cast<size_t>(std::max(pairs, 0)), {0, 0, 0, 0});
}

int PreferenceState::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

int& PreferenceState::counter(int i, int j, CellDirection t) {
    return counters_[pair_index(i, j)][static_cast<int>(t)];
}

int PreferenceState::counter(int i, int j, CellDirection t) const {
    return counters_[pair_index(i, j)][static_cast<int>(t)];
}

SweepOrder position_order(const Instance& inst, const Placement& p) {
    int n = inst.num_modules();
    std::vector<int> rank(static_cast<size_t>(n));
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
        double ka = p.x(inst, a) + p.y(inst, a);
        double kb = p.x(inst, b) + p.y(inst, b);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    SweepOrder order;
    order.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) order.emplace_back(rank[a], rank[b]);
    return order;
}

SweepOrder fixed_index_order(const Instance& inst) {
    SweepOrder order;
    int n = inst.num_modules();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) order.emplace_back(i, j);
    return order;
}

std::array<double, 4> preference_ratio(const Instance& inst, const Placement& p, int i, int j,
                                       PreferenceState& state, long reset_threshold) {
    if (i > j) std::swap(i, j);
    PairWork w = pair_work(inst, p, i, j);
    return ratios_from(w, state, i, j, reset_threshold);
}

std::array<double, 4> softmax_weights(const std::array<double, 4>& eta, double eps_pref) {
    double m = *std::max_element(eta.begin(), eta.end());
    if (!(m > -kInf))
        throw std::invalid_argument("softmax_weights: all preference ratios are -inf");
    std::array<double, 4> w{};
    double sum = 0.0;
    for (int t = 0; t < 4; ++t) {
        w[t] = eta[t] == -kInf ? 0.0 : std::exp((eta[t] - m) / eps_pref);
        sum += w[t];
    }
    for (double& x : w) x /= sum;
    return w;
}

namespace {

void apply_io_segments(const Instance& inst, Placement& z,
                       const std::vector<BoundarySegment>& io_segments) {
    for (const auto& seg : io_segments) z = project_boundary_segment(inst, z, seg);
}

bool pair_satisfied(const Instance& inst, const Placement& z, const PairWork& w) {
    for (int t = 0; t < 4; ++t)
        if (!w.cells[t].empty && placement_in_cell(inst, z, w.cells[t])) return true;
    return false;
}

}  // namespace

Placement rmap_sweep(const Instance& inst, const Placement& p, const SweepOrder& order,
                     PreferenceState& state, const RmapConfig& config,
                     const std::vector<BoundarySegment>& io_segments) {
    Placement z = p;
    for (auto [oi, oj] : order) {
        int i = std::min(oi, oj), j = std::max(oi, oj);
        PairWork w = pair_work(inst, z, i, j);
        if (w.best == kInf || w.best == 0.0) continue;  // all-empty or already satisfied
        std::array<double, 4> eta = ratios_from(w, state, i, j, config.reset_threshold);
        std::array<double, 4> weight = softmax_weights(eta, config.eps_pref);

        std::array<double, 4> mixed{};
        const auto& index = w.projs[0].index;  // identical across directions
        for (int k = 0; k < 4; ++k) mixed[k] = 0.0;
        for (int t = 0; t < 4; ++t) {
            if (weight[t] == 0.0) continue;
            for (int k = 0; k < 4; ++k) mixed[k] += weight[t] * w.projs[t].value[k];
        }
        for (int k = 0; k < 4; ++k) z.z[index[k]] = mixed[k];

        // dominant-direction bookkeeping for the resetting strategy
        int dominant = 0;
        for (int t = 1; t < 4; ++t)
            if (weight[t] > weight[dominant]) dominant = t;
        if (!pair_satisfied(inst, z, w))
            state.counter(i, j, static_cast<CellDirection>(dominant)) += 1;
    }
    apply_io_segments(inst, z, io_segments);
    return z;
}

Placement map_sweep(const Instance& inst, const Placement& p, const SweepOrder& order,
                    const std::vector<BoundarySegment>& io_segments) {
    Placement z = p;
    for (auto [oi, oj] : order) {
        int i = std::min(oi, oj), j = std::max(oi, oj);
        PairWork w = pair_work(inst, z, i, j);
        if (w.best == kInf || w.best == 0.0) continue;
        int pick = -1;
        for (int t = 0; t < 4; ++t) {
            if (w.projs[t].empty) continue;
            if (pick < 0 || w.projs[t].distance < w.projs[pick].distance) pick = t;
        }
        for (int k = 0; k < 4; ++k) z.z[w.projs[pick].index[k]] = w.projs[pick].value[k];
    }
    apply_io_segments(inst, z, io_segments);
    return z;
}

}  // namespace fplan
