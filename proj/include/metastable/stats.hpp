#ifndef METASTABLE_STATS_HPP
#define METASTABLE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "metastable/dirichlet.hpp"
#include "metastable/errors.hpp"
#include "metastable/eyring.hpp"
#include "metastable/sde.hpp"
#include "metastable/spectrum.hpp"

namespace metastable {

struct ExponentialityReport {
    int n = 0;
    int n_censored = 0;
    double mean = 0.0;
    double ks_statistic = 0.0;
    double p_value = 0.0;
    double rescaled_mean = 1.0; // tautologically 1 after rescaling
};

namespace detail {

/// Asymptotic Kolmogorov distribution tail with Stephens' finite-n factor.
inline double ks_p_value(double d, int n) {
    double t = d * (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(n));
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
        s += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

} // namespace detail

/// One-sample KS test of the mean-rescaled times against Exp(1).
inline ExponentialityReport exponentiality_test(const std::vector<TransitionSample>& samples) {
    std::vector<double> times;
    ExponentialityReport rep;
    for (const auto& s : samples) {
        if (s.censored) {
            ++rep.n_censored;
            continue;
        }
        times.push_back(s.hitting_time);
    }
    rep.n = static_cast<int>(times.size());
    if (rep.n < 200)
        throw TooFewSamples("exponentiality test needs >= 200 uncensored samples, got " +
                            std::to_string(rep.n));
    double sum = 0.0;
    for (double t : times) sum += t;
    rep.mean = sum / rep.n;

    double rescaled_sum = 0.0;
    for (auto& t : times) {
        t /= rep.mean;
        rescaled_sum += t;
    }
    rep.rescaled_mean = rescaled_sum / rep.n;

    std::sort(times.begin(), times.end());
    double d = 0.0;
    for (int i = 0; i < rep.n; ++i) {
        double cdf = 1.0 - std::exp(-times[i]);
        d = std::max(d, std::max((i + 1.0) / rep.n - cdf, cdf - static_cast<double>(i) / rep.n));
    }
    rep.ks_statistic = d;
    rep.p_value = detail::ks_p_value(d, rep.n);
    return rep;
}

/// Three routes to the same transition time: Eyring prediction, inverse
/// principal Dirichlet eigenvalue, and Monte Carlo mean.
struct RateComparison {
    std::optional<double> t_eyring;   // absent when no predictor applies
    double inv_lambda_pde = 0.0;
    double mean_mc = 0.0;
    double se_mc = 0.0;
    int n = 0;
    int n_censored = 0;
    double censor_rate = 0.0;
    std::optional<double> ratio_mc_pde;
    std::optional<double> ratio_pde_eyring;
    std::optional<double> ratio_mc_eyring;
    bool deviation_flag = false;
    std::string note;
};

inline RateComparison rate_comparison(const Potential& pot, const GridGraph& grid,
                                      const DiscreteGenerator& gen,
                                      const LandscapeSummary& land,
                                      const MetastableHierarchy& hier, int x,
                                      const std::vector<int>& targets, const SdeConfig& cfg,
                                      int n, double tolerance = 0.15) {
    RateComparison rc;
    double radius = cfg.resolved_target_radius();

    try {
        TimeScale ts = kramers_time(x, targets, land, cfg.epsilon);
        rc.t_eyring = ts.value_at(cfg.epsilon);
    } catch (const Error& e) {
        rc.note = std::string("predictor N/A: ") + e.what();
    }

    std::vector<Vector> centers;
    for (int y : targets) centers.push_back(land.minima[y].location);
    auto b_mask = RegionSpec::balls(centers, radius).resolve(grid);
    NodeMask domain(grid.size(), 1);
    for (std::int64_t i = 0; i < grid.size(); ++i) domain[i] = b_mask[i] ? 0 : 1;
    rc.inv_lambda_pde = 1.0 / principal_eigenvalue(gen, domain).lambda;

    TargetBalls balls{centers, radius};
    auto samples = sample_transitions(pot, land.minima[x].location, balls, cfg, n);
    double sum = 0.0;
    int m = 0;
    for (const auto& s : samples) {
        if (s.censored) {
            ++rc.n_censored;
            continue;
        }
        sum += s.hitting_time;
        ++m;
    }
    rc.n = m;
    rc.censor_rate = static_cast<double>(rc.n_censored) / samples.size();
    if (m > 0) rc.mean_mc = sum / m;
    if (m > 1) {
        double var = 0.0;
        for (const auto& s : samples)
            if (!s.censored) var += (s.hitting_time - rc.mean_mc) * (s.hitting_time - rc.mean_mc);
        rc.se_mc = std::sqrt(var / (m - 1) / m);
    }

    if (rc.mean_mc > 0.0) rc.ratio_mc_pde = rc.mean_mc / rc.inv_lambda_pde;
    if (rc.t_eyring) {
        rc.ratio_pde_eyring = rc.inv_lambda_pde / *rc.t_eyring;
        if (rc.mean_mc > 0.0) rc.ratio_mc_eyring = rc.mean_mc / *rc.t_eyring;
    }
    auto deviates = [tolerance](const std::optional<double>& r) {
        return r && std::abs(*r - 1.0) > tolerance;
    };
    rc.deviation_flag =
        deviates(rc.ratio_mc_pde) || deviates(rc.ratio_pde_eyring) || deviates(rc.ratio_mc_eyring);
    return rc;
}

} // namespace metastable

#endif
