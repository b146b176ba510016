#ifndef METASTABLE_GENERATOR_HPP
#define METASTABLE_GENERATOR_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Sparse>

#include "metastable/errors.hpp"
#include "metastable/grid.hpp"
#include "metastable/region.hpp"

namespace metastable {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Finite-volume discretization of the divergence-form generator on the
/// grid. Edge conductance between axis neighbors i,j:
///   w_ij = (eps/h_a^2) * exp(-(F_i + F_j - 2 F_ref)/(2 eps)) * prod_b h_b
/// node mass:
///   mu_i = exp(-(F_i - F_ref)/eps) * prod_b h_b
/// Values are shifted by the grid minimum F_ref and floored at e^-700.
/// laplacian() returns the positive-semidefinite form -K; the spec's K is
/// its negation (zero row sums, nonnegative off-diagonal conductances).
class DiscreteGenerator {
public:
    struct Edge {
        std::int64_t i, j;
        double w;
    };

    DiscreteGenerator() = default;

    DiscreteGenerator(const GridGraph* grid, double eps) : grid_(grid), eps_(eps) {
        if (eps <= 0.0) throw PreconditionViolation("assemble_generator: eps must be > 0");
        const auto& F = grid->values();
        f_ref_ = *std::min_element(F.begin(), F.end());
        const double vol = grid->cell_volume();
        const auto& h = grid->spacing();

        masses_.resize(grid->size());
        double max_shift = 0.0;
        for (std::int64_t i = 0; i < grid->size(); ++i) {
            double e = (F[i] - f_ref_) / eps;
            max_shift = std::max(max_shift, e);
            masses_[i] = std::exp(-std::min(e, 700.0)) * vol;
        }
        underflow_floored_ = max_shift > 700.0;

        edges_.reserve(static_cast<std::size_t>(grid->size()) * grid->dim());
        for (std::int64_t i = 0; i < grid->size(); ++i) {
            grid->for_neighbors(i, [&](std::int64_t j, int axis) {
                if (j < i) return; // each edge once
                double e = (F[i] + F[j] - 2.0 * f_ref_) / (2.0 * eps);
                double w = eps / (h[axis] * h[axis]) * std::exp(-std::min(e, 700.0)) * vol;
                edges_.push_back({i, j, w});
            });
        }

        lap_.resize(grid->size(), grid->size());
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(edges_.size() * 4);
        for (const auto& e : edges_) {
            trips.emplace_back(e.i, e.j, -e.w);
            trips.emplace_back(e.j, e.i, -e.w);
            trips.emplace_back(e.i, e.i, e.w);
            trips.emplace_back(e.j, e.j, e.w);
        }
        lap_.setFromTriplets(trips.begin(), trips.end());
        lap_.makeCompressed();
    }

    const GridGraph& grid() const { return *grid_; }
    double epsilon() const { return eps_; }
    double f_ref() const { return f_ref_; }
    const std::vector<double>& masses() const { return masses_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool underflow_floored() const { return underflow_floored_; }

    /// -K: positive semidefinite graph Laplacian with the edge conductances.
    const SparseMatrix& laplacian() const { return lap_; }

    /// v^T (-K) v via the edge sum: all-positive terms, no cancellation.
    double dirichlet_form(const std::vector<double>& v) const {
        double s = 0.0;
        for (const auto& e : edges_) {
            double d = v[e.i] - v[e.j];
            s += e.w * d * d;
        }
        return s;
    }

    /// u^T (-K) v via edges.
    double dirichlet_pairing(const std::vector<double>& u, const std::vector<double>& v) const {
        double s = 0.0;
        for (const auto& e : edges_)
            s += e.w * (u[e.i] - u[e.j]) * (v[e.i] - v[e.j]);
        return s;
    }

    /// sum of mu_i v_i^2.
    double mass_norm2(const std::vector<double>& v) const {
        double s = 0.0;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(v.size()); ++i)
            s += masses_[i] * v[i] * v[i];
        return s;
    }

    double mass_of(const NodeMask& m) const {
        double s = 0.0;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.size()); ++i)
            if (m[i]) s += masses_[i];
        return s;
    }

private:
    const GridGraph* grid_ = nullptr;
    double eps_ = 0.0;
    double f_ref_ = 0.0;
    bool underflow_floored_ = false;
    std::vector<double> masses_;
    std::vector<Edge> edges_;
    SparseMatrix lap_;
};

inline DiscreteGenerator assemble_generator(const GridGraph& grid, double eps) {
    return DiscreteGenerator(&grid, eps);
}

} // namespace metastable

#endif
