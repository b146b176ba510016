#ifndef METASTABLE_GRID_HPP
#define METASTABLE_GRID_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "metastable/errors.hpp"
#include "metastable/potential.hpp"

namespace metastable {

/// Regular tensor grid over the potential's box. Node values are the
/// potential sampled exactly at node coordinates; adjacency is axis
/// neighbors (interior nodes have 2*dim of them, the box boundary is a
/// wall -- no exterior nodes).
class GridGraph {
public:
    GridGraph() = default;

    GridGraph(const Potential& pot, std::vector<int> nodes_per_axis) {
        dim_ = pot.dim();
        if (static_cast<int>(nodes_per_axis.size()) != dim_)
            throw ValidationError("grid axis count does not match potential dimension");
        box_ = pot.domain_box();
        n_per_axis_ = std::move(nodes_per_axis);
        spacing_.resize(dim_);
        for (int a = 0; a < dim_; ++a) {
            if (n_per_axis_[a] < 2) throw ValidationError("grid needs >= 2 nodes per axis");
            spacing_[a] = (box_.hi[a] - box_.lo[a]) / (n_per_axis_[a] - 1);
        }
        strides_.assign(dim_, 1);
        for (int a = dim_ - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * n_per_axis_[a + 1];
        n_nodes_ = strides_[0] * n_per_axis_[0];

        values_.resize(n_nodes_);
        std::vector<double> x(dim_);
        std::vector<int> idx(dim_, 0);
        for (std::int64_t i = 0; i < n_nodes_; ++i) {
            unflatten(i, idx.data());
            for (int a = 0; a < dim_; ++a) x[a] = box_.lo[a] + idx[a] * spacing_[a];
            values_[i] = pot(x.data());
        }
    }

    int dim() const { return dim_; }
    std::int64_t size() const { return n_nodes_; }
    const std::vector<int>& shape() const { return n_per_axis_; }
    const std::vector<double>& spacing() const { return spacing_; }
    const Box& box() const { return box_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::int64_t i) const { return values_[i]; }

    double max_spacing() const {
        double m = 0.0;
        for (double s : spacing_) m = std::max(m, s);
        return m;
    }

    /// Cell volume prod_a h_a.
    double cell_volume() const {
        double v = 1.0;
        for (double s : spacing_) v *= s;
        return v;
    }

    void unflatten(std::int64_t i, int* idx) const {
        for (int a = 0; a < dim_; ++a) {
            idx[a] = static_cast<int>(i / strides_[a]);
            i -= static_cast<std::int64_t>(idx[a]) * strides_[a];
        }
    }

    std::int64_t flatten(const int* idx) const {
        std::int64_t i = 0;
        for (int a = 0; a < dim_; ++a) i += static_cast<std::int64_t>(idx[a]) * strides_[a];
        return i;
    }

    void coords(std::int64_t i, double* x) const {
        int idx[8];
        unflatten(i, idx);
        for (int a = 0; a < dim_; ++a) x[a] = box_.lo[a] + idx[a] * spacing_[a];
    }

    Vector coords(std::int64_t i) const {
        Vector x(dim_);
        coords(i, x.data());
        return x;
    }

    /// Flat index of the node nearest to x.
    std::int64_t nearest_node(const double* x) const {
        int idx[8];
        for (int a = 0; a < dim_; ++a) {
            int k = static_cast<int>(std::lround((x[a] - box_.lo[a]) / spacing_[a]));
            idx[a] = std::clamp(k, 0, n_per_axis_[a] - 1);
        }
        return flatten(idx);
    }
    std::int64_t nearest_node(const Vector& x) const { return nearest_node(x.data()); }

    /// Visit axis neighbors of node i: f(j, axis).
    template <class F>
    void for_neighbors(std::int64_t i, F&& f) const {
        int idx[8];
        unflatten(i, idx);
        for (int a = 0; a < dim_; ++a) {
            if (idx[a] > 0) f(i - strides_[a], a);
            if (idx[a] < n_per_axis_[a] - 1) f(i + strides_[a], a);
        }
    }

    /// True if the node lies on the box boundary.
    bool on_boundary(std::int64_t i) const {
        int idx[8];
        unflatten(i, idx);
        for (int a = 0; a < dim_; ++a)
            if (idx[a] == 0 || idx[a] == n_per_axis_[a] - 1) return true;
        return false;
    }

private:
    int dim_ = 0;
    Box box_;
    std::vector<int> n_per_axis_;
    std::vector<double> spacing_;
    std::vector<std::int64_t> strides_;
    std::int64_t n_nodes_ = 0;
    std::vector<double> values_;
};

/// Default resolution: >= 400 cells per axis in 1D, >= 150 in 2D.
inline std::vector<int> default_grid_nodes(int dim) {
    if (dim == 1) return {401};
    if (dim == 2) return {151, 151};
    return std::vector<int>(dim, 61);
}

inline GridGraph make_default_grid(const Potential& pot) {
    return GridGraph(pot, default_grid_nodes(pot.dim()));
}

using NodeMask = std::vector<char>;

} // namespace metastable

#endif
