#include "coldist/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coldist {

namespace {

constexpr double kSupplyEps = 1e-12;   // degeneracy perturbation
constexpr double kMassTol = 1e-6;

// Basis of a transportation LP: a spanning tree over row nodes 0..n-1 and
// column nodes n..n+m-1, one tree edge per basic cell. Adjacency is kept
// incrementally and the traversal buffers are reused across pivots; the
// compass detector solves hundreds of thousands of these per image.
struct Simplex {
    int n, m;
    const Matrix& cost;
    std::vector<char> in_basis;        // n*m flags
    std::vector<double> flow;          // perturbed flows, n*m
    std::vector<std::vector<int>> adj; // node -> incident basic cells
    std::vector<double> u, v;          // duals

    std::vector<char> seen;
    std::vector<int> stack, parent_cell, parent_node, path;

    Simplex(int n_, int m_, const Matrix& c)
        : n(n_), m(m_), cost(c),
          in_basis(static_cast<std::size_t>(n_) * m_, 0),
          flow(static_cast<std::size_t>(n_) * m_, 0.0),
          adj(n_ + m_), u(n_), v(m_),
          seen(n_ + m_), parent_cell(n_ + m_), parent_node(n_ + m_) {}

    int cell(int i, int j) const { return i * m + j; }
    int row_of(int c) const { return c / m; }
    int col_of(int c) const { return c % m; }

    void add_edge(int c) {
        adj[row_of(c)].push_back(c);
        adj[n + col_of(c)].push_back(c);
    }

    void remove_edge(int c) {
        auto drop = [c](std::vector<int>& list) {
            list.erase(std::find(list.begin(), list.end(), c));
        };
        drop(adj[row_of(c)]);
        drop(adj[n + col_of(c)]);
    }

    // u[0] = 0, then propagate u_i + v_j = c_ij over the basis tree.
    void compute_duals() {
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, 0);
        u[0] = 0.0;
        seen[0] = 1;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            for (int c : adj[node]) {
                const int i = row_of(c), j = col_of(c);
                const int other = (node < n) ? n + j : i;
                if (seen[other]) continue;
                if (other >= n)
                    v[j] = cost.at(i, j) - u[i];
                else
                    u[i] = cost.at(i, j) - v[j];
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }

    // Path between two nodes along the basis tree, returned as cell ids.
    const std::vector<int>& tree_path(int from, int to) {
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, from);
        seen[from] = 1;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            if (node == to) break;
            for (int c : adj[node]) {
                const int other = (node < n) ? n + col_of(c) : row_of(c);
                if (seen[other]) continue;
                seen[other] = 1;
                parent_cell[other] = c;
                parent_node[other] = node;
                stack.push_back(other);
            }
        }
        path.clear();
        for (int node = to; node != from; node = parent_node[node])
            path.push_back(parent_cell[node]);
        std::reverse(path.begin(), path.end());
        return path;
    }

    // Solve the basic flows exactly for the given marginals by leaf
    // elimination over the basis tree.
    void solve_flows(const std::vector<double>& supply, const std::vector<double>& demand) {
        std::vector<double> rem(n + m);
        for (int i = 0; i < n; ++i) rem[i] = supply[i];
        for (int j = 0; j < m; ++j) rem[n + j] = demand[j];
        std::vector<int> degree(n + m);
        std::vector<std::vector<int>> local = adj;
        std::vector<char> done_cell(static_cast<std::size_t>(n) * m, 0);
        std::vector<int> leaves;
        for (int node = 0; node < n + m; ++node) {
            degree[node] = static_cast<int>(local[node].size());
            if (degree[node] == 1) leaves.push_back(node);
        }
        while (!leaves.empty()) {
            const int node = leaves.back();
            leaves.pop_back();
            if (degree[node] != 1) continue;
            int edge = -1;
            for (int c : local[node])
                if (!done_cell[c]) { edge = c; break; }
            if (edge < 0) continue;
            const int i = row_of(edge), j = col_of(edge);
            const int other = (node < n) ? n + j : i;
            flow[edge] = rem[node];
            done_cell[edge] = 1;
            rem[other] -= rem[node];
            rem[node] = 0.0;
            degree[node] = 0;
            if (--degree[other] == 1) leaves.push_back(other);
        }
    }
};

void validate_problem(const TransportProblem& prob) {
    const int n = static_cast<int>(prob.supply.size());
    const int m = static_cast<int>(prob.demand.size());
    if (n == 0 || m == 0)
        throw std::invalid_argument("solve_transport: empty supply or demand");
    if (prob.cost.rows != n || prob.cost.cols != m)
        throw std::invalid_argument("solve_transport: cost matrix is " +
                                    std::to_string(prob.cost.rows) + "x" +
                                    std::to_string(prob.cost.cols) + ", expected " +
                                    std::to_string(n) + "x" + std::to_string(m));
    for (double c : prob.cost.v)
        if (!std::isfinite(c) || c < 0.0)
            throw std::invalid_argument("solve_transport: costs must be finite and non-negative");
    double s = 0.0, d = 0.0;
    for (double x : prob.supply) {
        if (!(x >= 0.0)) throw std::invalid_argument("solve_transport: negative supply");
        s += x;
    }
    for (double x : prob.demand) {
        if (!(x >= 0.0)) throw std::invalid_argument("solve_transport: negative demand");
        d += x;
    }
    if (std::fabs(s - d) > kMassTol)
        throw std::invalid_argument("solve_transport: unbalanced problem (supply " +
                                    std::to_string(s) + ", demand " + std::to_string(d) + ")");
}

}  // namespace

TransportPlan solve_transport(const TransportProblem& prob) {
    validate_problem(prob);
    const int n = static_cast<int>(prob.supply.size());
    const int m = static_cast<int>(prob.demand.size());

    // Perturbed marginals break degeneracy; the last demand absorbs the mass.
    std::vector<double> supply = prob.supply;
    std::vector<double> demand = prob.demand;
    for (double& x : supply) x += kSupplyEps;
    demand[m - 1] += n * kSupplyEps;

    Simplex sx(n, m, prob.cost);

    // Northwest-corner initial basis: n + m - 1 cells forming a tree.
    {
        std::vector<double> srem = supply, drem = demand;
        int i = 0, j = 0;
        while (true) {
            const double f = std::min(srem[i], drem[j]);
            sx.in_basis[sx.cell(i, j)] = 1;
            sx.flow[sx.cell(i, j)] = f;
            srem[i] -= f;
            drem[j] -= f;
            if (i == n - 1 && j == m - 1) break;
            if (srem[i] <= drem[j]) {
                if (i < n - 1) ++i; else ++j;
            } else {
                if (j < m - 1) ++j; else ++i;
            }
        }
    }

    double max_cost = 0.0;
    for (double c : prob.cost.v) max_cost = std::max(max_cost, c);
    const double opt_tol = 1e-9 * std::max(1.0, max_cost);

    const long bland_after = 64L * (n + m) * (n + m);
    const long iter_cap = 16 * bland_after + 100000;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (sx.in_basis[sx.cell(i, j)]) sx.add_edge(sx.cell(i, j));

    for (long iter = 0;; ++iter) {
        if (iter > iter_cap)
            throw std::runtime_error("solve_transport: pivot limit exceeded");
        sx.compute_duals();

        // Entering variable: most negative reduced cost, lexicographic
        // tie-break; plain Bland (first negative) once past the iteration
        // threshold.
        const bool bland = iter >= bland_after;
        int enter = -1;
        double best = -opt_tol;
        for (int i = 0; i < n && !(bland && enter != -1); ++i) {
            for (int j = 0; j < m; ++j) {
                const int c = sx.cell(i, j);
                if (sx.in_basis[c]) continue;
                const double rc = prob.cost.at(i, j) - sx.u[i] - sx.v[j];
                if (rc < best) {
                    best = rc;
                    enter = c;
                    if (bland) break;
                }
            }
        }
        if (enter == -1) break;  // reduced costs all >= -tol: optimal

        // Cycle: entering cell plus the tree path from its column back to
        // its row. The entering cell gets +theta and the signs alternate
        // along the path starting with -theta.
        const int ei = sx.row_of(enter), ej = sx.col_of(enter);
        const std::vector<int>& path = sx.tree_path(n + ej, ei);

        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t k = 0; k < path.size(); k += 2) {
            const double f = sx.flow[path[k]];
            if (f < theta || (f == theta && path[k] < leave)) {
                theta = f;
                leave = path[k];
            }
        }

        sx.flow[enter] += theta;
        for (std::size_t k = 0; k < path.size(); ++k) {
            if (k % 2 == 0)
                sx.flow[path[k]] -= theta;
            else
                sx.flow[path[k]] += theta;
        }
        sx.in_basis[enter] = 1;
        sx.in_basis[leave] = 0;
        sx.flow[leave] = 0.0;
        sx.add_edge(enter);
        sx.remove_edge(leave);
    }

    // Final basis found; recompute exact flows from the unperturbed
    // marginals so the epsilon never reaches the caller.
    sx.solve_flows(prob.supply, prob.demand);

    TransportPlan plan;
    plan.row_duals = sx.u;
    plan.col_duals = sx.v;
    double objective = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const int c = sx.cell(i, j);
            if (!sx.in_basis[c]) continue;
            double f = sx.flow[c];
            if (f < 0.0) {
                if (f < -1e-8)
                    throw std::runtime_error("solve_transport: infeasible basic flow");
                f = 0.0;
            }
            if (f > 0.0) {
                plan.flows.push_back({i, j, f});
                objective += f * prob.cost.at(i, j);
            }
        }
    plan.objective = objective;
    return plan;
}

double emd(std::span<const double> p, std::span<const double> q, const Matrix& cost) {
    if (static_cast<int>(p.size()) != cost.rows || static_cast<int>(q.size()) != cost.cols)
        throw std::invalid_argument("emd: histogram sizes do not match the ground matrix");
    const double sp = std::accumulate(p.begin(), p.end(), 0.0);
    const double sq = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::fabs(sp - sq) > kMassTol)
        throw std::invalid_argument("emd: total masses differ by more than 1e-6");
    TransportProblem prob;
    prob.supply.assign(p.begin(), p.end());
    prob.demand.assign(q.begin(), q.end());
    prob.cost = cost;
    return solve_transport(prob).objective;
}

}  // namespace coldist
