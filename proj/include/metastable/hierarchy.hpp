#ifndef METASTABLE_HIERARCHY_HPP
#define METASTABLE_HIERARCHY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "metastable/critical_points.hpp"
#include "metastable/errors.hpp"
#include "metastable/eyring.hpp"
#include "metastable/minimax.hpp"

namespace metastable {

/// Minima, pairwise communication heights and (when found) the separating
/// saddles of a potential on a grid. The common input of the hierarchy and
/// predictor operations.
struct LandscapeSummary {
    std::vector<CriticalPoint> minima;
    Matrix heights;                                             // pairwise Fhat
    std::vector<std::vector<std::optional<CriticalPoint>>> saddles; // per pair
    std::vector<std::string> saddle_notes;
    double grid_spacing = 0.0;

    int count() const { return static_cast<int>(minima.size()); }
};

/// Locate minima, compute all pairwise communication heights by minimax
/// sweeps, and refine one saddle per pair.
inline LandscapeSummary summarize_landscape(const Potential& pot, const GridGraph& grid) {
    LandscapeSummary s;
    s.grid_spacing = grid.max_spacing();
    auto search = find_minima(pot, grid);
    s.minima = std::move(search.minima);
    const int n = s.count();
    if (n == 0) throw NonConvergence("no minima found on the grid");
    s.heights = Matrix::Zero(n, n);
    s.saddles.assign(n, std::vector<std::optional<CriticalPoint>>(n));

    std::vector<std::int64_t> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = grid.nearest_node(s.minima[i].location);
    std::vector<MinimaxField> fields(n);
    for (int i = 0; i < n; ++i) fields[i] = minimax_distances_from(nodes[i], grid);

    for (int i = 0; i < n; ++i) {
        s.heights(i, i) = s.minima[i].value;
        for (int j = i + 1; j < n; ++j) {
            s.heights(i, j) = s.heights(j, i) = fields[i].field[nodes[j]];
            try {
                auto z = find_saddle_between(pot, s.minima[i].location,
                                             s.minima[j].location, grid);
                s.saddles[i][j] = s.saddles[j][i] = z;
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << "saddle(" << i << "," << j << "): " << e.what();
                s.saddle_notes.push_back(msg.str());
            }
        }
    }
    return s;
}

namespace detail {

inline double rate_to_set(const LandscapeSummary& s, int x, const std::vector<int>& targets) {
    if (targets.empty()) return std::numeric_limits<double>::infinity();
    double hmin = std::numeric_limits<double>::infinity();
    for (int y : targets) hmin = std::min(hmin, s.heights(x, y));
    return hmin - s.minima[x].value;
}

} // namespace detail

/// T_{x,I}: rate from communication heights, prefactor from the unique
/// highest saddle on the transition. Ties within 1e-6 in saddle value at
/// distinct locations refuse with NonUniqueSaddle.
inline TimeScale kramers_time(int x, const std::vector<int>& targets,
                              const LandscapeSummary& s, double eps) {
    TimeScale ts;
    ts.source = x;
    ts.targets = targets;
    ts.dim = static_cast<int>(s.minima[x].location.size());
    if (targets.empty()) {
        ts.infinite = true;
        return ts;
    }
    bool contains_x = std::find(targets.begin(), targets.end(), x) != targets.end();
    if (contains_x && static_cast<int>(targets.size()) == s.count()) {
        ts.full_set_convention = true; // T_M = 1/eps^{d-1}
        return ts;
    }

    double hmin = std::numeric_limits<double>::infinity();
    for (int y : targets)
        if (y != x) hmin = std::min(hmin, s.heights(x, y));
    ts.rate = hmin - s.minima[x].value;

    // gather candidate saddles at the communication height
    const double value_tol = 1e-6;
    std::vector<const CriticalPoint*> cands;
    for (int y : targets) {
        if (y == x || s.heights(x, y) > hmin + value_tol) continue;
        if (!s.saddles[x][y])
            throw NonConvergence("kramers_time: separating saddle unavailable");
        cands.push_back(&*s.saddles[x][y]);
    }
    std::vector<const CriticalPoint*> distinct;
    for (auto* c : cands) {
        bool dup = false;
        for (auto* d : distinct)
            if ((c->location - d->location).norm() < 1e-5 * (1.0 + c->location.norm()))
                dup = true;
        if (!dup) distinct.push_back(c);
    }
    if (distinct.size() > 1) {
        double v0 = distinct[0]->value;
        for (auto* d : distinct)
            if (std::abs(d->value - v0) < value_tol)
                throw NonUniqueSaddle("two saddles tie at the communication height");
    }
    const CriticalPoint& z = *distinct.front();
    ts.prefactor = kramers_prefactor(s.minima[x], z);
    (void)eps;
    return ts;
}

/// The minima ordered by decreasing time scale, with M(x), T_x, the
/// genericity gap rho, and the auxiliary scales used by the eigenvalue
/// correspondence.
struct MetastableHierarchy {
    std::vector<int> order;               // minimum indices, T decreasing
    std::vector<std::vector<int>> m_of;   // M(x) = {y | F(y) < F(x)}
    std::vector<TimeScale> t_of;          // T_x = T_{x, M(x)}
    std::vector<double> t_script_rate;    // per minimum, rate level (4.33)
    std::vector<double> e_script_rate;    // per minimum, rate level (4.42)
    double rho = std::numeric_limits<double>::infinity();
    bool genericity_violated = false;
    std::vector<std::string> notes;
    double epsilon = 0.0;

    int position(int minimum) const {
        for (int p = 0; p < static_cast<int>(order.size()); ++p)
            if (order[p] == minimum) return p;
        return -1;
    }
    int global_minimum() const { return order.front(); }
};

/// Genericity gap at the level of exponential rates: minimum of
/// rate(x, I\x) - rate(y, I\y) over all competing finite pairs with the
/// first at least the second.
inline double genericity_gap(const LandscapeSummary& s, double tie_tol, bool* tied,
                             std::vector<std::string>* notes) {
    const int n = s.count();
    if (n > 16) throw PreconditionViolation("genericity enumeration limited to 16 minima");
    double rho = std::numeric_limits<double>::infinity();
    if (tied) *tied = false;
    std::vector<int> sub;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (int x = 0; x < n; ++x) {
            sub.clear();
            for (int j = 0; j < n; ++j)
                if ((mask >> j & 1u) && j != x) sub.push_back(j);
            double rx = detail::rate_to_set(s, x, sub);
            if (!std::isfinite(rx)) continue;
            for (int y = 0; y < n; ++y) {
                if (y == x) continue;
                sub.clear();
                for (int j = 0; j < n; ++j)
                    if ((mask >> j & 1u) && j != y) sub.push_back(j);
                double ry = detail::rate_to_set(s, y, sub);
                if (!std::isfinite(ry) || rx < ry) continue;
                double diff = rx - ry;
                rho = std::min(rho, diff);
                if (diff < tie_tol && tied && !*tied) {
                    *tied = true;
                    if (notes) {
                        std::ostringstream msg;
                        msg << "competing rates tie: minima " << x << " and " << y
                            << " within " << tie_tol;
                        notes->push_back(msg.str());
                    }
                }
            }
        }
    }
    return rho;
}

inline MetastableHierarchy build_hierarchy(const LandscapeSummary& s, double eps) {
    const int n = s.count();
    const double tie_tol = 1e-6;
    MetastableHierarchy h;
    h.epsilon = eps;
    h.m_of.resize(n);
    h.t_of.resize(n);

    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y)
            if (y != x && s.minima[y].value < s.minima[x].value) h.m_of[x].push_back(y);
        try {
            h.t_of[x] = kramers_time(x, h.m_of[x], s, eps);
        } catch (const NonUniqueSaddle& e) {
            h.t_of[x] = TimeScale{};
            h.t_of[x].source = x;
            h.t_of[x].targets = h.m_of[x];
            h.t_of[x].rate = detail::rate_to_set(s, x, h.m_of[x]);
            h.t_of[x].prefactor = 1.0;
            h.notes.push_back(std::string("T_x prefactor for minimum ") + std::to_string(x) +
                              " unavailable: " + e.what());
        } catch (const NonConvergence& e) {
            h.t_of[x] = TimeScale{};
            h.t_of[x].source = x;
            h.t_of[x].targets = h.m_of[x];
            h.t_of[x].rate = detail::rate_to_set(s, x, h.m_of[x]);
            h.t_of[x].prefactor = 1.0;
            h.notes.push_back(std::string("T_x prefactor for minimum ") + std::to_string(x) +
                              " unavailable: " + e.what());
        }
    }

    h.order.resize(n);
    for (int i = 0; i < n; ++i) h.order[i] = i;
    std::sort(h.order.begin(), h.order.end(), [&](int a, int b) {
        const TimeScale &ta = h.t_of[a], &tb = h.t_of[b];
        if (ta.infinite != tb.infinite) return ta.infinite;
        if (ta.infinite) return a < b;
        double la = ta.log_value_at(eps), lb = tb.log_value_at(eps);
        if (la != lb) return la > lb;
        return a < b;
    });

    int n_inf = 0;
    for (const auto& t : h.t_of) n_inf += t.infinite ? 1 : 0;
    if (n_inf != 1) {
        h.genericity_violated = true;
        h.notes.push_back("expected exactly one minimum with T = infinity, found " +
                          std::to_string(n_inf));
    }
    for (int p = 0; p + 1 < n; ++p) {
        const TimeScale &ta = h.t_of[h.order[p]], &tb = h.t_of[h.order[p + 1]];
        if (!ta.infinite && !tb.infinite && std::abs(ta.rate - tb.rate) < tie_tol) {
            h.genericity_violated = true;
            h.notes.push_back("time-scale rates tie between minima " +
                              std::to_string(h.order[p]) + " and " +
                              std::to_string(h.order[p + 1]));
        }
    }

    bool tied = false;
    h.rho = genericity_gap(s, tie_tol, &tied, &h.notes);
    if (tied) h.genericity_violated = true;

    // auxiliary scales over the ordered prefixes, at rate level
    h.t_script_rate.assign(n, std::numeric_limits<double>::infinity());
    h.e_script_rate.assign(n, std::numeric_limits<double>::infinity());
    for (int p = 0; p < n; ++p) {
        int x = h.order[p];
        std::vector<int> before(h.order.begin(), h.order.begin() + p);
        if (before.size() >= 2) {
            double best = std::numeric_limits<double>::infinity();
            for (int y : before)
                for (int z : before)
                    if (z != y) best = std::min(best, s.heights(y, z) - s.minima[y].value);
            h.t_script_rate[x] = best;
        }
        if (!before.empty()) {
            double best = std::numeric_limits<double>::infinity();
            for (int y : before) {
                std::vector<int> targets;
                for (int q = 0; q <= p; ++q)
                    if (h.order[q] != y) targets.push_back(h.order[q]);
                best = std::min(best, detail::rate_to_set(s, y, targets));
            }
            h.e_script_rate[x] = best;
        }
    }
    return h;
}

/// Schematic entry point: minima values + height matrix only (prefactors 1).
inline LandscapeSummary schematic_landscape(const std::vector<double>& f_values,
                                            const Matrix& heights) {
    LandscapeSummary s;
    const int n = static_cast<int>(f_values.size());
    s.minima.resize(n);
    for (int i = 0; i < n; ++i) {
        CriticalPoint cp;
        cp.location = Vector::Constant(1, static_cast<double>(i));
        cp.value = f_values[i];
        cp.hess_eigenvalues = Vector::Constant(1, 1.0);
        cp.index = 0;
        cp.kind = CriticalKind::minimum;
        s.minima[i] = cp;
    }
    s.heights = heights;
    s.saddles.assign(n, std::vector<std::optional<CriticalPoint>>(n));
    return s;
}

/// lambda_x = 1 / T_{x, M(x)}; zero for the global minimum.
inline double eigenvalue_prediction(int x, const MetastableHierarchy& h, double eps) {
    if (h.m_of[x].empty() && x == h.global_minimum() && !h.genericity_violated) return 0.0;
    if (h.genericity_violated)
        throw GenericityViolation("eigenvalue prediction needs a generic hierarchy");
    if (h.m_of[x].empty()) return 0.0;
    return 1.0 / h.t_of[x].value_at(eps);
}

struct UltrametricViolation {
    int x, y, z;
    double excess; // Ehat(x,y) - max(Ehat(x,z), Ehat(z,y))
};

/// Empty iff Ehat(x,y) <= max(Ehat(x,z), Ehat(z,y)) + tol on all triples.
inline std::vector<UltrametricViolation> ultrametric_report(const Matrix& heights,
                                                            double tol = 0.0) {
    std::vector<UltrametricViolation> out;
    const int n = static_cast<int>(heights.rows());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            for (int z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                double rhs = std::max(heights(x, z), heights(z, y));
                if (heights(x, y) > rhs + tol)
                    out.push_back({x, y, z, heights(x, y) - rhs});
            }
        }
    return out;
}

} // namespace metastable

#endif
