#pragma once

#include <tuple>
#include <vector>

#include "fplan/projections.hpp"

namespace fplan {

// Two-point decomposition of the netlist: clique edges for nets of up to 3
// pins, a synthetic star node for larger nets. Endpoint entities 0..N-1 are
// the instance entities; N and above are star nodes.
struct NetDecomposition {
    struct Endpoint {
        int entity = 0;
        double dx = 0.0;
        double dy = 0.0;
    };
    struct Edge {
        Endpoint a, b;
        double weight = 1.0;
    };
    std::vector<Edge> edges;
    int star_count = 0;
};

NetDecomposition hybrid_net_decompose(const Instance& inst);

// One quadratic wirelength system per axis over the movable unknowns
// (modules first, then star nodes). Symmetric, sparse, made positive
// definite by anchoring components with no fixed terminal at the die center.
struct QpSystem {
    int n = 0;
    std::vector<double> diag;
    std::vector<std::tuple<int, int, double>> off;  // i < j, symmetric
    std::vector<double> rhs;
    std::vector<int> anchored;  // representative unknown of each anchorless component
};

QpSystem build_quadratic_system(const Instance& inst, const NetDecomposition& dec, Axis axis);

struct PcgResult {
    std::vector<double> solution;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

// Jacobi-preconditioned conjugate gradients.
PcgResult pcg_solve(const QpSystem& system, double tol = 1e-8, int max_iter = 2000);

// Modules with area strictly below the given quantile of the module-area
// distribution are translated to the nearest die boundary (ties broken
// L, R, B, T).
Placement shift_key_modules(const Instance& inst, const Placement& p, double area_quantile);

struct InitConfig {
    double area_quantile = 0.2;
    double pcg_tolerance = 1e-8;
    int pcg_max_iterations = 2000;
};

// Quadratic solve per axis, clamp into the die, then key-module shifting.
// Boundary-assigned I/O pins start at their side midpoints.
Placement initialize(const Instance& inst, const InitConfig& config = {});

}  // namespace fplan
