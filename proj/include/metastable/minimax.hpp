#ifndef METASTABLE_MINIMAX_HPP
#define METASTABLE_MINIMAX_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "metastable/errors.hpp"
#include "metastable/grid.hpp"

namespace metastable {

/// Result of a minimax (bottleneck) sweep: field[y] = Fhat(sources, y),
/// the least possible maximum of F along a grid path, and parent pointers
/// for path extraction.
struct MinimaxField {
    std::vector<double> field;
    std::vector<std::int64_t> parent; // -1 at sources / unreached
};

/// Greedy best-first expansion ordered by path bottleneck value. Exact on
/// grids: once a node is popped its bottleneck value is final.
inline MinimaxField minimax_distances_from(const std::vector<std::int64_t>& sources,
                                           const GridGraph& grid) {
    const double inf = std::numeric_limits<double>::infinity();
    MinimaxField out;
    out.field.assign(grid.size(), inf);
    out.parent.assign(grid.size(), -1);

    using Item = std::pair<double, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (auto s : sources) {
        double v = grid.value(s);
        if (v < out.field[s]) {
            out.field[s] = v;
            pq.push({v, s});
        }
    }
    std::vector<char> done(grid.size(), 0);
    while (!pq.empty()) {
        auto [bv, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        grid.for_neighbors(u, [&](std::int64_t v, int) {
            if (done[v]) return;
            double cand = std::max(bv, grid.value(v));
            if (cand < out.field[v]) {
                out.field[v] = cand;
                out.parent[v] = u;
                pq.push({cand, v});
            }
        });
    }
    return out;
}

inline MinimaxField minimax_distances_from(std::int64_t source, const GridGraph& grid) {
    return minimax_distances_from(std::vector<std::int64_t>{source}, grid);
}

/// Fhat(A, B): min over grid paths from A to B of the max node value.
/// Overlapping sets communicate through a constant path.
inline double communication_height(const std::vector<std::int64_t>& A,
                                   const std::vector<std::int64_t>& B,
                                   const GridGraph& grid) {
    if (A.empty() || B.empty()) throw PreconditionViolation("communication_height: empty set");
    std::vector<char> inA(grid.size(), 0);
    for (auto a : A) inA[a] = 1;
    double best = std::numeric_limits<double>::infinity();
    bool overlap = false;
    for (auto b : B)
        if (inA[b]) {
            overlap = true;
            best = std::min(best, grid.value(b));
        }
    if (overlap) return best;

    auto mf = minimax_distances_from(A, grid);
    for (auto b : B) best = std::min(best, mf.field[b]);
    if (!std::isfinite(best)) throw Disconnected("communication_height: no path inside box");
    return best;
}

/// Node sequence of a minimax path from the sweep's source set to node b.
inline std::vector<std::int64_t> minimax_path_to(const MinimaxField& mf, std::int64_t b) {
    std::vector<std::int64_t> path;
    std::int64_t u = b;
    while (u >= 0) {
        path.push_back(u);
        u = mf.parent[u];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// Basin mask A_{x,I}: nodes y with Fhat(y,x) < Fhat(y, I\x). Ties (within
/// tie_tol) belong to neither basin. Empty I means the whole box.
inline NodeMask basin(std::int64_t x_node, const std::vector<std::int64_t>& other_nodes,
                      const GridGraph& grid, double tie_tol = 0.0) {
    NodeMask mask(grid.size(), 1);
    if (other_nodes.empty()) return mask;
    auto fx = minimax_distances_from(x_node, grid);
    std::vector<double> fo(grid.size(), std::numeric_limits<double>::infinity());
    for (auto y : other_nodes) {
        auto fy = minimax_distances_from(y, grid);
        for (std::int64_t i = 0; i < grid.size(); ++i) fo[i] = std::min(fo[i], fy.field[i]);
    }
    for (std::int64_t i = 0; i < grid.size(); ++i)
        mask[i] = fx.field[i] < fo[i] - tie_tol ? 1 : 0;
    return mask;
}

/// Confinement check: measured c = min |grad F| over grid nodes with F > C1.
struct AssumptionReport {
    double c1 = 0.0;
    double c_measured = 0.0;          // inf over {F > C1} of |grad F|
    std::int64_t argmin_node = -1;
    std::int64_t nodes_above = 0;
    bool violated = false;            // c_measured not strictly positive
};

inline AssumptionReport check_assumptions(const Potential& pot, double c1,
                                          const GridGraph& grid,
                                          double zero_tol = 1e-10) {
    AssumptionReport rep;
    rep.c1 = c1;
    rep.c_measured = std::numeric_limits<double>::infinity();
    std::vector<double> x(grid.dim()), g(grid.dim());
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        if (grid.value(i) <= c1) continue;
        ++rep.nodes_above;
        grid.coords(i, x.data());
        pot.grad_into(x.data(), g.data());
        double norm = 0.0;
        for (int a = 0; a < grid.dim(); ++a) norm += g[a] * g[a];
        norm = std::sqrt(norm);
        if (norm < rep.c_measured) {
            rep.c_measured = norm;
            rep.argmin_node = i;
        }
    }
    if (rep.nodes_above == 0) rep.c_measured = std::numeric_limits<double>::infinity();
    rep.violated = !(rep.c_measured > zero_tol);
    return rep;
}

} // namespace metastable

#endif
