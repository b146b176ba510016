#ifndef METASTABLE_EYRING_HPP
#define METASTABLE_EYRING_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "metastable/critical_points.hpp"
#include "metastable/errors.hpp"

namespace metastable {

/// Asymptotic time scale T = prefactor * exp(rate/eps). The full-set
/// convention T_M = 1/eps^{d-1} is carried as a flag so value_at stays
/// consistent across eps.
struct TimeScale {
    int source = -1;
    std::vector<int> targets;
    double rate = 0.0;       // Fhat(x, I) - F(x), energy units
    double prefactor = 1.0;
    bool infinite = false;   // convention T_x = infinity for M(x) empty
    bool full_set_convention = false;
    int dim = 1;

    double value_at(double eps) const {
        if (infinite) return std::numeric_limits<double>::infinity();
        if (full_set_convention) return std::pow(eps, -(dim - 1));
        return prefactor * std::exp(rate / eps);
    }

    double log_value_at(double eps) const {
        if (infinite) return std::numeric_limits<double>::infinity();
        if (full_set_convention) return -(dim - 1) * std::log(eps);
        return std::log(prefactor) + rate / eps;
    }
};

namespace detail {
inline double hess_det(const CriticalPoint& cp) {
    double det = 1.0;
    for (int i = 0; i < cp.hess_eigenvalues.size(); ++i) det *= cp.hess_eigenvalues[i];
    return det;
}
} // namespace detail

/// Laplace approximation of the basin integral of exp(-F/eps) around a
/// nondegenerate minimum: (2 pi eps)^{d/2} e^{-F(x)/eps} / sqrt(det Hess F(x)).
inline double gaussian_mass(const CriticalPoint& x, double eps) {
    const int d = static_cast<int>(x.location.size());
    double det = detail::hess_det(x);
    if (det <= 0.0 || x.index != 0)
        throw DegenerateHessian("gaussian_mass requires a nondegenerate minimum");
    return std::pow(2.0 * M_PI * eps, 0.5 * d) * std::exp(-x.value / eps) / std::sqrt(det);
}

/// Capacity asymptotics through a unique index-1 saddle z*:
/// (2 pi)^{d/2-1} |l*| eps^{d/2} e^{-F(z*)/eps} / sqrt(|det Hess F(z*)|).
inline double eyring_capacity(const CriticalPoint& zstar, double eps) {
    const int d = static_cast<int>(zstar.location.size());
    if (zstar.index != 1)
        throw NotIndexOne("eyring_capacity requires an index-1 saddle");
    double det = detail::hess_det(zstar);
    if (std::abs(det) < 1e-10 || zstar.kind == CriticalKind::other)
        throw DegenerateHessian("eyring_capacity: saddle Hessian is degenerate");
    double lam_star = zstar.hess_eigenvalues[0]; // sorted: the negative one
    return std::pow(2.0 * M_PI, 0.5 * d - 1.0) * std::abs(lam_star) * std::pow(eps, 0.5 * d) *
           std::exp(-zstar.value / eps) / std::sqrt(std::abs(det));
}

/// Mean transition time prefactor through a unique saddle:
/// (2 pi / |l*|) sqrt(|det Hess F(z*)| / det Hess F(x)).
inline double kramers_prefactor(const CriticalPoint& x, const CriticalPoint& zstar) {
    double detx = detail::hess_det(x);
    double detz = detail::hess_det(zstar);
    if (detx <= 0.0 || x.index != 0)
        throw DegenerateHessian("kramers_prefactor: minimum Hessian is degenerate");
    if (zstar.index != 1 || std::abs(detz) < 1e-10)
        throw DegenerateHessian("kramers_prefactor: saddle Hessian is degenerate");
    double lam_star = std::abs(zstar.hess_eigenvalues[0]);
    return 2.0 * M_PI / lam_star * std::sqrt(std::abs(detz) / detx);
}

} // namespace metastable

#endif
