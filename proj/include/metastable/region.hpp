#ifndef METASTABLE_REGION_HPP
#define METASTABLE_REGION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "metastable/errors.hpp"
#include "metastable/grid.hpp"

namespace metastable {

enum class RegionKind { ball_union, sublevel, box_complement, node_mask };

/// A region of the grid: union of balls, a sublevel set, the boundary
/// shell standing in for the box exterior, or an explicit node mask.
struct RegionSpec {
    RegionKind kind = RegionKind::node_mask;
    std::vector<Vector> centers; // ball_union
    double radius = 0.0;         // ball_union; must resolve to >= 2h
    double threshold = 0.0;      // sublevel: F <= threshold
    NodeMask mask;               // node_mask

    static RegionSpec balls(std::vector<Vector> centers, double radius) {
        RegionSpec r;
        r.kind = RegionKind::ball_union;
        r.centers = std::move(centers);
        r.radius = radius;
        return r;
    }
    static RegionSpec ball(const Vector& center, double radius) {
        return balls({center}, radius);
    }
    static RegionSpec sublevel(double threshold) {
        RegionSpec r;
        r.kind = RegionKind::sublevel;
        r.threshold = threshold;
        return r;
    }
    static RegionSpec box_complement() {
        RegionSpec r;
        r.kind = RegionKind::box_complement;
        return r;
    }
    static RegionSpec nodes(NodeMask mask) {
        RegionSpec r;
        r.kind = RegionKind::node_mask;
        r.mask = std::move(mask);
        return r;
    }

    NodeMask resolve(const GridGraph& grid) const {
        NodeMask m(grid.size(), 0);
        switch (kind) {
            case RegionKind::ball_union: {
                double hmax = grid.max_spacing();
                if (radius < 2.0 * hmax - 1e-12)
                    throw RegionError("ball radius under-resolved: radius " +
                                      std::to_string(radius) + " < 2h = " +
                                      std::to_string(2.0 * hmax));
                std::vector<double> x(grid.dim());
                for (std::int64_t i = 0; i < grid.size(); ++i) {
                    grid.coords(i, x.data());
                    for (const auto& c : centers) {
                        double d2 = 0.0;
                        for (int a = 0; a < grid.dim(); ++a) {
                            double dx = x[a] - c[a];
                            d2 += dx * dx;
                        }
                        if (d2 <= radius * radius) {
                            m[i] = 1;
                            break;
                        }
                    }
                }
                break;
            }
            case RegionKind::sublevel:
                for (std::int64_t i = 0; i < grid.size(); ++i)
                    if (grid.value(i) <= threshold) m[i] = 1;
                break;
            case RegionKind::box_complement:
                for (std::int64_t i = 0; i < grid.size(); ++i)
                    if (grid.on_boundary(i)) m[i] = 1;
                break;
            case RegionKind::node_mask:
                if (static_cast<std::int64_t>(mask.size()) != grid.size())
                    throw RegionError("node mask size does not match grid");
                m = mask;
                break;
        }
        bool any = false;
        for (char c : m) any |= (c != 0);
        if (!any) throw RegionError("region resolves to an empty node set");
        return m;
    }

    std::string describe() const {
        std::string s;
        switch (kind) {
            case RegionKind::ball_union: {
                s = "balls(r=" + std::to_string(radius) + ";";
                for (const auto& c : centers) {
                    for (int a = 0; a < c.size(); ++a) s += " " + std::to_string(c[a]);
                    s += ",";
                }
                s += ")";
                break;
            }
            case RegionKind::sublevel: s = "sublevel(" + std::to_string(threshold) + ")"; break;
            case RegionKind::box_complement: s = "box_complement"; break;
            case RegionKind::node_mask: {
                std::size_t hash = 1469598103934665603ull;
                for (char c : mask) hash = (hash ^ static_cast<unsigned char>(c)) * 1099511628211ull;
                s = "mask(" + std::to_string(hash) + ")";
                break;
            }
        }
        return s;
    }
};

/// Default ball radius eps/4, clamped up to 2h when the grid is coarse.
inline double default_ball_radius(double eps, const GridGraph& grid, bool* clamped = nullptr) {
    double r = eps / 4.0;
    double floor = 2.0 * grid.max_spacing();
    if (clamped) *clamped = r < floor;
    return std::max(r, floor);
}

inline std::int64_t mask_count(const NodeMask& m) {
    std::int64_t n = 0;
    for (char c : m) n += (c != 0);
    return n;
}

} // namespace metastable

#endif
