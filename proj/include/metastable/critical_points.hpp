#ifndef METASTABLE_CRITICAL_POINTS_HPP
#define METASTABLE_CRITICAL_POINTS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metastable/errors.hpp"
#include "metastable/grid.hpp"
#include "metastable/minimax.hpp"
#include "metastable/potential.hpp"

namespace metastable {

enum class CriticalKind { minimum, saddle, other };

inline const char* to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::minimum: return "minimum";
        case CriticalKind::saddle: return "saddle";
        default: return "other";
    }
}

struct CriticalPoint {
    Vector location;
    double value = 0.0;
    Vector hess_eigenvalues; // sorted ascending
    int index = 0;           // count of negative Hessian eigenvalues
    CriticalKind kind = CriticalKind::other;
};

namespace detail {

constexpr double kGradTol = 1e-10;
constexpr double kDegenerateEig = 1e-8;
constexpr int kMaxNewton = 50;

inline CriticalPoint classify(const Potential& pot, const Vector& x) {
    CriticalPoint cp;
    cp.location = x;
    cp.value = pot(x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(pot.hess(x));
    cp.hess_eigenvalues = es.eigenvalues();
    cp.index = 0;
    bool degenerate = false;
    for (int i = 0; i < cp.hess_eigenvalues.size(); ++i) {
        if (cp.hess_eigenvalues[i] < 0) ++cp.index;
        if (std::abs(cp.hess_eigenvalues[i]) < kDegenerateEig) degenerate = true;
    }
    if (degenerate)
        cp.kind = CriticalKind::other;
    else if (cp.index == 0)
        cp.kind = CriticalKind::minimum;
    else if (cp.index == 1)
        cp.kind = CriticalKind::saddle;
    else
        cp.kind = CriticalKind::other;
    return cp;
}

/// Newton on grad F, damped toward descent of |grad|^2; falls back to
/// gradient descent with Armijo line search when the Hessian step fails.
inline std::optional<Vector> refine_minimum(const Potential& pot, Vector x,
                                            double max_step) {
    const int d = pot.dim();
    for (int it = 0; it < kMaxNewton; ++it) {
        Vector g = pot.grad(x);
        if (g.norm() <= kGradTol) return x;
        Matrix H = pot.hess(x);
        Vector step;
        bool newton_ok = false;
        Eigen::LDLT<Matrix> ldlt(H);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            step = ldlt.solve(-g);
            newton_ok = step.allFinite();
        }
        if (newton_ok && step.norm() > max_step) step *= max_step / step.norm();
        if (newton_ok) {
            double f0 = pot(x);
            Vector xn = x + step;
            if (pot(xn) <= f0 + 1e-12 * std::abs(f0)) {
                x = xn;
                continue;
            }
        }
        // Armijo backtracking on -grad
        double f0 = pot(x);
        double t = std::min(1.0, max_step / std::max(g.norm(), 1e-300));
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            Vector xn = x - t * g;
            if (pot(xn) <= f0 - 1e-4 * t * g.squaredNorm()) {
                x = xn;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) return std::nullopt;
        (void)d;
    }
    return pot.grad(x).norm() <= kGradTol ? std::optional<Vector>(x) : std::nullopt;
}

/// Plain Newton on grad F for saddle refinement (seed is near the saddle).
inline std::optional<Vector> refine_critical(const Potential& pot, Vector x,
                                             double max_step) {
    for (int it = 0; it < kMaxNewton; ++it) {
        Vector g = pot.grad(x);
        if (g.norm() <= kGradTol) return x;
        Matrix H = pot.hess(x);
        Eigen::FullPivLU<Matrix> lu(H);
        if (!lu.isInvertible()) return std::nullopt;
        Vector step = lu.solve(-g);
        if (!step.allFinite()) return std::nullopt;
        if (step.norm() > max_step) step *= max_step / step.norm();
        x += step;
    }
    return pot.grad(x).norm() <= kGradTol ? std::optional<Vector>(x) : std::nullopt;
}

} // namespace detail

struct SeedFailure {
    std::int64_t node = -1;
    std::string reason;
};

struct MinimaSearch {
    std::vector<CriticalPoint> minima;
    std::vector<SeedFailure> failures; // per-seed non-convergence, not fatal
};

/// All distinct local minima reachable by refinement from discrete grid
/// minima, deduplicated by distance < h.
inline MinimaSearch find_minima(const Potential& pot, const GridGraph& grid) {
    MinimaSearch out;
    const double h = grid.max_spacing();
    std::vector<std::int64_t> seeds;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        bool is_min = true;
        grid.for_neighbors(i, [&](std::int64_t j, int) {
            if (grid.value(j) <= grid.value(i)) is_min = false;
        });
        if (is_min) seeds.push_back(i);
    }
    for (auto s : seeds) {
        Vector x0 = grid.coords(s);
        auto xr = detail::refine_minimum(pot, x0, 10.0 * h);
        if (!xr) {
            out.failures.push_back({s, "Newton and descent failed to converge"});
            continue;
        }
        if (!grid.box().contains(xr->data())) {
            out.failures.push_back({s, "refined point left the search box"});
            continue;
        }
        CriticalPoint cp = detail::classify(pot, *xr);
        if (cp.kind != CriticalKind::minimum) {
            out.failures.push_back({s, std::string("refined point is not a minimum (") +
                                           to_string(cp.kind) + ")"});
            continue;
        }
        bool dup = false;
        for (const auto& m : out.minima)
            if ((m.location - cp.location).norm() < h) dup = true;
        if (!dup) out.minima.push_back(std::move(cp));
    }
    std::sort(out.minima.begin(), out.minima.end(), [](const auto& a, const auto& b) {
        return a.location[0] < b.location[0];
    });
    return out;
}

/// Index-1 critical point at the communication height between minima a and b.
/// Seed = argmax of F along the minimax grid path, refined by Newton.
inline CriticalPoint find_saddle_between(const Potential& pot, const Vector& a,
                                         const Vector& b, const GridGraph& grid) {
    std::int64_t na = grid.nearest_node(a), nb = grid.nearest_node(b);
    auto mf = minimax_distances_from(na, grid);
    if (!std::isfinite(mf.field[nb])) throw Disconnected("no grid path between minima");
    auto path = minimax_path_to(mf, nb);
    std::int64_t seed = path.front();
    double best = -std::numeric_limits<double>::infinity();
    for (auto n : path)
        if (grid.value(n) > best) {
            best = grid.value(n);
            seed = n;
        }
    auto xr = detail::refine_critical(pot, grid.coords(seed), 10.0 * grid.max_spacing());
    if (!xr) throw NonConvergence("saddle refinement did not converge");
    CriticalPoint cp = detail::classify(pot, *xr);
    double det = 1.0;
    for (int i = 0; i < cp.hess_eigenvalues.size(); ++i) det *= cp.hess_eigenvalues[i];
    if (std::abs(det) < 1e-10)
        throw DegenerateHessian("saddle Hessian determinant below 1e-10");
    if (cp.index != 1)
        throw NotIndexOne("refined critical point has index " + std::to_string(cp.index));
    return cp;
}

} // namespace metastable

#endif
