#ifndef METASTABLE_SDE_HPP
#define METASTABLE_SDE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "metastable/errors.hpp"
#include "metastable/grid.hpp"
#include "metastable/hierarchy.hpp"
#include "metastable/potential.hpp"
#include "metastable/region.hpp"
#include "metastable/rng.hpp"

namespace metastable {

enum class BoxBoundary { absorbing, reflecting };

struct SdeConfig {
    double epsilon = 0.1;
    double dt = 1e-3;
    double max_time = 1e6;
    std::uint64_t master_seed = 0;
    double target_radius = 0.0; // 0: default eps/4
    BoxBoundary boundary = BoxBoundary::absorbing;
    int threads = 1;

    double resolved_target_radius() const {
        return target_radius > 0.0 ? target_radius : epsilon / 4.0;
    }
};

/// dt must resolve the drift on the sampled region and the target ball must
/// exceed one step's diffusion displacement. Throws ValidationError listing
/// every violated constraint.
inline void validate_sde_config(const SdeConfig& cfg, double max_grad_sampled) {
    std::string problems;
    double g2 = max_grad_sampled * max_grad_sampled;
    double dt_cap = std::min(g2 > 0.0 ? 0.1 * cfg.epsilon / g2 : 0.01, 0.01);
    if (cfg.dt > dt_cap * (1.0 + 1e-12))
        problems += "dt " + std::to_string(cfg.dt) + " exceeds bound " +
                    std::to_string(dt_cap) + " = min(0.1 eps/max|grad F|^2, 0.01); ";
    double r = cfg.resolved_target_radius();
    double rmin = 4.0 * std::sqrt(2.0 * cfg.epsilon * cfg.dt);
    if (r < rmin)
        problems += "target radius " + std::to_string(r) + " below detectability floor " +
                    std::to_string(rmin) + " = 4 sqrt(2 eps dt); ";
    if (cfg.epsilon <= 0.0) problems += "epsilon must be positive; ";
    if (cfg.dt <= 0.0) problems += "dt must be positive; ";
    if (cfg.max_time <= 0.0) problems += "max_time must be positive; ";
    if (!problems.empty()) throw ValidationError("sde config: " + problems);
}

/// max |grad F| over grid nodes with F below the given level (the region
/// trajectories actually sample before a transition).
inline double max_grad_below(const Potential& pot, const GridGraph& grid, double level) {
    std::vector<double> x(grid.dim()), g(grid.dim());
    double mx = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        if (grid.value(i) > level) continue;
        grid.coords(i, x.data());
        pot.grad_into(x.data(), g.data());
        double n2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) n2 += g[a] * g[a];
        mx = std::max(mx, n2);
    }
    return std::sqrt(mx);
}

/// One simulated first-hitting event.
struct TransitionSample {
    int start = -1;            // minimum identity, -1 for a free start point
    std::string target_set;
    double hitting_time = 0.0;
    std::int64_t steps = 0;
    bool censored = false;
    bool exited_box = false;
};

struct TargetBalls {
    std::vector<Vector> centers;
    double radius = 0.0;
};

namespace detail {

/// Signed distance to the nearest target ball surface (negative inside).
inline double target_distance(const double* x, int d, const TargetBalls& t) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : t.centers) {
        double d2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double dx = x[a] - c[a];
            d2 += dx * dx;
        }
        best = std::min(best, std::sqrt(d2) - t.radius);
    }
    return best;
}

} // namespace detail

/// Euler-Maruyama until the first entry into a target ball or the box
/// complement. The hit time is refined by linear interpolation of the
/// signed distance between the last two states. Deterministic in
/// (master_seed, trial).
inline TransitionSample hitting_time(const Potential& pot, const Vector& x0,
                                     const TargetBalls& targets, const SdeConfig& cfg,
                                     std::uint64_t trial = 0) {
    const int d = pot.dim();
    if (detail::target_distance(x0.data(), d, targets) <= 0.0)
        throw PreconditionViolation("start point lies inside a target");
    const Box& box = pot.domain_box();
    CounterRng rng(cfg.master_seed, trial);
    const double sq = std::sqrt(2.0 * cfg.epsilon * cfg.dt);
    const int pairs_per_step = (d + 1) / 2;

    std::vector<double> x(x0.data(), x0.data() + d), g(d), noise(2 * pairs_per_step);
    double dist_prev = detail::target_distance(x.data(), d, targets);
    TransitionSample out;
    out.target_set = "balls";
    const std::int64_t max_steps = static_cast<std::int64_t>(cfg.max_time / cfg.dt) + 1;

    for (std::int64_t step = 0; step < max_steps; ++step) {
        pot.grad_into(x.data(), g.data());
        std::uint64_t base = static_cast<std::uint64_t>(step) * pairs_per_step;
        for (int p = 0; p < pairs_per_step; ++p)
            rng.normal_pair(base + p, noise[2 * p], noise[2 * p + 1]);
        bool exited = false;
        for (int a = 0; a < d; ++a) {
            x[a] += -g[a] * cfg.dt + sq * noise[a];
            if (x[a] < box.lo[a] || x[a] > box.hi[a]) {
                if (cfg.boundary == BoxBoundary::reflecting) {
                    if (x[a] < box.lo[a]) x[a] = 2.0 * box.lo[a] - x[a];
                    if (x[a] > box.hi[a]) x[a] = 2.0 * box.hi[a] - x[a];
                    x[a] = std::clamp(x[a], box.lo[a], box.hi[a]);
                } else {
                    exited = true;
                }
            }
        }
        out.steps = step + 1;
        if (exited) {
            // box exit counts as a hit of the omega-complement, flagged
            out.exited_box = true;
            out.hitting_time = (step + 1) * cfg.dt;
            return out;
        }
        double dist = detail::target_distance(x.data(), d, targets);
        if (dist <= 0.0) {
            double theta = dist_prev / (dist_prev - dist); // in (0,1]
            out.hitting_time = (step + theta) * cfg.dt;
            return out;
        }
        dist_prev = dist;
    }
    out.censored = true;
    out.hitting_time = cfg.max_time;
    return out;
}

/// Batch driver: n independent trials, stream i keyed by (master_seed, i).
/// Trials may run on several threads; outputs are ordered by trial index
/// and bitwise independent of the schedule.
inline std::vector<TransitionSample> sample_transitions(const Potential& pot, const Vector& x0,
                                                        const TargetBalls& targets,
                                                        const SdeConfig& cfg, int n) {
    if (n < 1) throw PreconditionViolation("sample_transitions needs n >= 1");
    std::vector<TransitionSample> out(n);
    int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) out[i] = hitting_time(pot, x0, targets, cfg, i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                out[i] = hitting_time(pot, x0, targets, cfg, i);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

/// tau(x): first hit of balls around all strictly deeper minima (or the
/// box complement).
inline TransitionSample metastable_transition_time(const Potential& pot,
                                                   const LandscapeSummary& land,
                                                   const MetastableHierarchy& hier, int x,
                                                   const SdeConfig& cfg,
                                                   std::uint64_t trial = 0) {
    if (hier.m_of[x].empty())
        throw PreconditionViolation("metastable transition undefined for the global minimum");
    TargetBalls targets;
    targets.radius = cfg.resolved_target_radius();
    for (int y : hier.m_of[x]) targets.centers.push_back(land.minima[y].location);
    auto s = hitting_time(pot, land.minima[x].location, targets, cfg, trial);
    s.start = x;
    return s;
}

} // namespace metastable

#endif
