#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coldist {

// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}

    double& at(int i, int j) { return v[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(i) * cols + j]; }
};

// Balanced transportation problem: non-negative supplies and demands with
// equal total mass, non-negative finite costs.
struct TransportProblem {
    std::vector<double> supply;
    std::vector<double> demand;
    Matrix cost;
};

struct TransportPlan {
    struct Flow {
        int from = 0;
        int to = 0;
        double amount = 0.0;
    };
    std::vector<Flow> flows;  // strictly positive flows only
    double objective = 0.0;
    // Dual prices certifying optimality: cost(i,j) - row_duals[i] - col_duals[j]
    // >= -1e-9 * max(1, max cost) for every cell.
    std::vector<double> row_duals;
    std::vector<double> col_duals;
};

// Exact optimum of the balanced transportation LP via the transportation
// simplex (northwest-corner start, u/v dual pricing, cycle pivoting).
// Degeneracy is handled by a 1e-12 supply perturbation that is removed from
// the reported flows. Throws std::invalid_argument on malformed input.
TransportPlan solve_transport(const TransportProblem& prob);

// Earth Mover's Distance between distributions p and q under `cost`.
// Requires p.size() == cost.rows, q.size() == cost.cols and total masses
// matching within 1e-6.
double emd(std::span<const double> p, std::span<const double> q, const Matrix& cost);

}  // namespace coldist
