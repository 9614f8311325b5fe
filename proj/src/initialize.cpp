#include "fplan/initialize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fplan {

NetDecomposition hybrid_net_decompose(const Instance& inst) {
    NetDecomposition dec;
    int n = inst.num_entities();
    auto endpoint = [&](int pin_index) {
        const PinSpec& pin = inst.pins[pin_index];
        NetDecomposition::Endpoint e;
        if (pin.on_module) {
            e.entity = pin.owner;
            e.dx = pin.dx;
            e.dy = pin.dy;
        } else {
            e.entity = inst.io_entity(pin.owner);
        }
        return e;
    };
    for (const auto& net : inst.nets) {
        int k = static_cast<int>(net.pins.size());
        if (k <= 3) {
            double w = net.weight / static_cast<double>(k - 1);
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    dec.edges.push_back({endpoint(net.pins[a]), endpoint(net.pins[b]), w});
        } else {
            int star = n + dec.star_count++;
            double w = net.weight * static_cast<double>(k) / static_cast<double>(k - 1);
            for (int pin : net.pins)
                dec.edges.push_back({endpoint(pin), {star, 0.0, 0.0}, w});
        }
    }
    return dec;
}

namespace {

struct EntityInfo {
    bool movable = false;
    int unknown = -1;      // index into the QP unknowns
    double fx = 0.0;       // fixed position, valid when !movable
    double fy = 0.0;
};

// Unknowns are the modules followed by the star nodes. I/O pins are fixed
// terminals: at their coordinates when fixed, at side midpoints otherwise.
std::vector<EntityInfo> classify(const Instance& inst, const NetDecomposition& dec) {
    int n = inst.num_entities();
    std::vector<EntityInfo> info(static_cast<size_t>(n + dec.star_count));
    int n_m = inst.num_modules();
    for (int i = 0; i < n_m; ++i) {
        info[i].movable = true;
        info[i].unknown = i;
    }
    for (int io = 0; io < inst.num_io(); ++io) {
        EntityInfo& e = info[inst.io_entity(io)];
        const IoPinSpec& spec = inst.io_pins[io];
        if (spec.fixed) {
            e.fx = spec.x;
            e.fy = spec.y;
        } else {
            BoundarySegment seg = segment_for_io(inst, io);
            double mid = (seg.free_lo + seg.free_hi) / 2.0;
            if (spec.side == Side::Left || spec.side == Side::Right) {
                e.fx = seg.fixed_value;
                e.fy = mid;
            } else {
                e.fx = mid;
                e.fy = seg.fixed_value;
            }
        }
    }
    for (int s = 0; s < dec.star_count; ++s) {
        info[n + s].movable = true;
        info[n + s].unknown = n_m + s;
    }
    return info;
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

QpSystem build_quadratic_system(const Instance& inst, const NetDecomposition& dec, Axis axis) {
    std::vector<EntityInfo> info = classify(inst, dec);
    int n_unknowns = inst.num_modules() + dec.star_count;
    QpSystem sys;
    sys.n = n_unknowns;
    sys.diag.assign(static_cast<size_t>(n_unknowns), 0.0);
    sys.rhs.assign(static_cast<size_t>(n_unknowns), 0.0);

    std::map<std::pair<int, int>, double> off;
    DisjointSet comps(n_unknowns);
    std::vector<bool> has_fixed(static_cast<size_t>(n_unknowns), false);

    auto offset = [&](const NetDecomposition::Endpoint& e) {
        return axis == Axis::X ? e.dx : e.dy;
    };
    auto fixed_pos = [&](const NetDecomposition::Endpoint& e) {
        const EntityInfo& ei = info[e.entity];
        return (axis == Axis::X ? ei.fx : ei.fy) + offset(e);
    };

    for (const auto& edge : dec.edges) {
        const EntityInfo& ia = info[edge.a.entity];
        const EntityInfo& ib = info[edge.b.entity];
        double w = edge.weight;
        if (ia.movable && ib.movable) {
            int ua = ia.unknown, ub = ib.unknown;
            sys.diag[ua] += w;
            sys.diag[ub] += w;
            // w * (u_a + da - u_b - db)^2: cross term and constant shift
            auto key = std::minmax(ua, ub);
            off[{key.first, key.second}] += -w;
            double shift = offset(edge.a) - offset(edge.b);
            sys.rhs[ua] += -w * shift;
            sys.rhs[ub] += w * shift;
            comps.unite(ua, ub);
        } else if (ia.movable != ib.movable) {
            const NetDecomposition::Endpoint& mv = ia.movable ? edge.a : edge.b;
            const NetDecomposition::Endpoint& fx = ia.movable ? edge.b : edge.a;
            int u = info[mv.entity].unknown;
            sys.diag[u] += w;
            sys.rhs[u] += w * (fixed_pos(fx) - offset(mv));
            has_fixed[u] = true;
        }
        // fixed-fixed edges are constants
    }

    // propagate fixed-terminal anchoring through components, then anchor the
    // rest at the die center
    std::vector<bool> comp_fixed(static_cast<size_t>(n_unknowns), false);
    for (int u = 0; u < n_unknowns; ++u)
        if (has_fixed[u]) comp_fixed[comps.find(u)] = true;
    double center = (axis == Axis::X ? inst.die.width : inst.die.height) / 2.0;
    std::vector<bool> seen(static_cast<size_t>(n_unknowns), false);
    for (int u = 0; u < n_unknowns; ++u) {
        int root = comps.find(u);
        if (comp_fixed[root] || seen[root]) continue;
        seen[root] = true;
        sys.diag[u] += 1.0;
        sys.rhs[u] += center;
        sys.anchored.push_back(u);
    }

    sys.off.reserve(off.size());
    for (const auto& [key, w] : off)
        if (w != 0.0) sys.off.emplace_back(key.first, key.second, w);
    return sys;
}

namespace {

void matvec(const QpSystem& sys, const std::vector<double>& x, std::vector<double>& out) {
    for (int i = 0; i < sys.n; ++i) out[i] = sys.diag[i] * x[i];
    for (const auto& [i, j, w] : sys.off) {
        out[i] += w * x[j];
        out[j] += w * x[i];
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

PcgResult pcg_solve(const QpSystem& sys, double tol, int max_iter) {
    PcgResult res;
    size_t n = static_cast<size_t>(sys.n);
    res.solution.assign(n, 0.0);
    std::vector<double> r = sys.rhs, z(n), p(n), ap(n);
    double bnorm = std::sqrt(dot(sys.rhs, sys.rhs));
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    auto precond = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (size_t i = 0; i < n; ++i) out[i] = sys.diag[i] > 0.0 ? v[i] / sys.diag[i] : v[i];
    };
    precond(r, z);
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        matvec(sys, p, ap);
        double pap = dot(p, ap);
        if (pap <= 0.0) break;
        double alpha = rz / pap;
        for (size_t i = 0; i < n; ++i) {
            res.solution[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res.iterations = it + 1;
        res.residual = std::sqrt(dot(r, r)) / bnorm;
        if (res.residual <= tol) {
            res.converged = true;
            break;
        }
        precond(r, z);
        double rz_next = dot(r, z);
        double beta = rz_next / rz;
        rz = rz_next;
        for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return res;
}

Placement shift_key_modules(const Instance& inst, const Placement& p, double area_quantile) {
    Placement out = p;
    int n = inst.num_modules();
    if (n == 0) return out;
    std::vector<double> areas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) areas[i] = inst.modules[i].area();
    std::vector<double> sorted = areas;
    std::sort(sorted.begin(), sorted.end());
    size_t cut = static_cast<size_t>(area_quantile * static_cast<double>(n));
    cut = std::min(cut, sorted.size() - 1);
    double threshold = sorted[cut];
    for (int i = 0; i < n; ++i) {
        if (!(areas[i] < threshold)) continue;  // strict-below rule
        BoxConstraint box = box_for_module(inst, i);
        double x = out.x(inst, i), y = out.y(inst, i);
        // distance to each boundary, tie order L, R, B, T
        double d[4] = {x - box.x_lo, box.x_hi - x, y - box.y_lo, box.y_hi - y};
        int best = 0;
        for (int s = 1; s < 4; ++s)
            if (d[s] < d[best]) best = s;
        switch (best) {
            case 0: out.x(inst, i) = box.x_lo; break;
            case 1: out.x(inst, i) = box.x_hi; break;
            case 2: out.y(inst, i) = box.y_lo; break;
            case 3: out.y(inst, i) = box.y_hi; break;
        }
    }
    return out;
}

Placement initialize(const Instance& inst, const InitConfig& config) {
    Placement p = make_placement(inst);
    NetDecomposition dec = hybrid_net_decompose(inst);
    for (int axis = 0; axis < 2; ++axis) {
        QpSystem sys = build_quadratic_system(inst, dec, static_cast<Axis>(axis));
        PcgResult sol = pcg_solve(sys, config.pcg_tolerance, config.pcg_max_iterations);
        for (int i = 0; i < inst.num_modules(); ++i) {
            BoxConstraint box = box_for_module(inst, i);
            double v = sol.solution[i];
            if (axis == 0)
                p.x(inst, i) = std::clamp(v, box.x_lo, box.x_hi);
            else
                p.y(inst, i) = std::clamp(v, box.y_lo, box.y_hi);
        }
    }
    for (int io = 0; io < inst.num_io(); ++io) {
        int e = inst.io_entity(io);
        const IoPinSpec& spec = inst.io_pins[io];
        if (spec.fixed) {
            p.x(inst, e) = spec.x;
            p.y(inst, e) = spec.y;
        } else {
            BoundarySegment seg = segment_for_io(inst, io);
            double mid = (seg.free_lo + seg.free_hi) / 2.0;
            if (spec.side == Side::Left || spec.side == Side::Right) {
                p.x(inst, e) = seg.fixed_value;
                p.y(inst, e) = mid;
            } else {
                p.x(inst, e) = mid;
                p.y(inst, e) = seg.fixed_value;
            }
        }
    }
    return shift_key_modules(inst, p, config.area_quantile);
}

}  // namespace fplan
