#ifndef METASTABLE_SPECTRUM_HPP
#define METASTABLE_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "metastable/dirichlet.hpp"
#include "metastable/errors.hpp"
#include "metastable/generator.hpp"
#include "metastable/hierarchy.hpp"
#include "metastable/minimax.hpp"
#include "metastable/region.hpp"

namespace metastable {

struct EigenPair {
    double lambda = 0.0;
    std::vector<double> vector; // full grid, zero off the domain, M-normalized
    double residual = 0.0;      // ||A y - lambda y|| in the symmetrized basis
};

namespace detail {

/// Symmetrized operator M^{-1/2}(-K)M^{-1/2} restricted to a domain mask.
/// Entries stay O(eps/h^2) for every potential, which keeps factorizations
/// healthy where the raw conductances span hundreds of decades.
class SymmetrizedOperator {
public:
    SymmetrizedOperator(const DiscreteGenerator& gen, const NodeMask& domain)
        : gen_(&gen) {
        const std::int64_t n = gen.grid().size();
        index_of_.assign(n, -1);
        for (std::int64_t i = 0; i < n; ++i)
            if (domain[i]) {
                index_of_[i] = m_;
                nodes_.push_back(i);
                ++m_;
            }
        if (m_ == 0) throw RegionError("eigenproblem domain is empty");
        const auto& mu = gen.masses();
        sqrt_mu_.resize(m_);
        for (std::int64_t k = 0; k < m_; ++k) sqrt_mu_[k] = std::sqrt(mu[nodes_[k]]);

        std::vector<Eigen::Triplet<double>> trips;
        std::vector<double> diag(m_, 0.0);
        for (const auto& e : gen.edges()) {
            std::int64_t a = index_of_[e.i], b = index_of_[e.j];
            if (a >= 0) diag[a] += e.w;
            if (b >= 0) diag[b] += e.w;
            if (a >= 0 && b >= 0) {
                double v = -e.w / (sqrt_mu_[a] * sqrt_mu_[b]);
                trips.emplace_back(a, b, v);
                trips.emplace_back(b, a, v);
            }
        }
        max_diag_ = 0.0;
        for (std::int64_t k = 0; k < m_; ++k) {
            double d = diag[k] / (sqrt_mu_[k] * sqrt_mu_[k]);
            trips.emplace_back(k, k, d);
            max_diag_ = std::max(max_diag_, d);
        }
        A_.resize(m_, m_);
        A_.setFromTriplets(trips.begin(), trips.end());
        A_.makeCompressed();
        full_domain_ = (m_ == n);
    }

    std::int64_t size() const { return m_; }
    bool full_domain() const { return full_domain_; }
    double max_diag() const { return max_diag_; }
    const SparseMatrix& matrix() const { return A_; }
    const std::vector<std::int64_t>& nodes() const { return nodes_; }

    /// y (symmetrized basis) -> full node vector v = M^{-1/2} y.
    std::vector<double> to_node_vector(const Eigen::VectorXd& y) const {
        std::vector<double> v(gen_->grid().size(), 0.0);
        for (std::int64_t k = 0; k < m_; ++k) v[nodes_[k]] = y[k] / sqrt_mu_[k];
        return v;
    }

    /// Exact null direction of the full-domain operator: q = M^{1/2} 1.
    Eigen::VectorXd constant_direction() const {
        Eigen::VectorXd q(m_);
        for (std::int64_t k = 0; k < m_; ++k) q[k] = sqrt_mu_[k];
        q.normalize();
        return q;
    }

private:
    const DiscreteGenerator* gen_;
    std::int64_t m_ = 0;
    bool full_domain_ = false;
    double max_diag_ = 0.0;
    std::vector<std::int64_t> nodes_;
    std::vector<std::int64_t> index_of_;
    std::vector<double> sqrt_mu_;
    SparseMatrix A_;
};

inline void orthogonalize(Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) y -= b.dot(y) * b;
}

} // namespace detail

constexpr std::int64_t kDenseEigenLimit = 2000;

/// k smallest generalized eigenpairs of (-K) v = lambda M v on the domain.
/// Dense solve for small systems, otherwise shift-invert inverse iteration
/// with deflation on the symmetrized operator. Eigenvalues from the edge-sum
/// Rayleigh quotient (positive terms only), eigenvectors M-orthonormal.
inline std::vector<EigenPair> low_spectrum(const DiscreteGenerator& gen,
                                           const NodeMask& domain, int k) {
    if (k < 1 || k > 8) throw PreconditionViolation("low_spectrum supports 1 <= k <= 8");
    detail::SymmetrizedOperator sym(gen, domain);
    if (k > sym.size()) throw PreconditionViolation("k exceeds domain size");

    std::vector<Eigen::VectorXd> ys;
    std::vector<EigenPair> out;

    auto finish_pair = [&](const Eigen::VectorXd& y, double residual) {
        EigenPair p;
        p.vector = sym.to_node_vector(y);
        double num = gen.dirichlet_form(p.vector);
        double den = gen.mass_norm2(p.vector);
        p.lambda = num / den;
        p.residual = residual;
        double s = 1.0 / std::sqrt(den);
        for (auto& v : p.vector) v *= s;
        out.push_back(std::move(p));
    };

    if (sym.size() <= kDenseEigenLimit) {
        Eigen::MatrixXd Ad(sym.matrix());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad);
        if (es.info() != Eigen::Success) throw ConvergenceFailure("dense eigensolver failed");
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXd y;
            if (i == 0 && sym.full_domain()) {
                // the zero mode is exact; the solved column carries mixing
                // noise that M^{-1/2} blows up in light-mass regions
                y = sym.constant_direction();
            } else {
                y = es.eigenvectors().col(i);
            }
            Eigen::VectorXd r = sym.matrix() * y - es.eigenvalues()[i] * y;
            finish_pair(y, r.norm());
        }
    } else {
        const double sigma = 1e-13 * sym.max_diag();
        SparseMatrix As = sym.matrix();
        for (std::int64_t i = 0; i < sym.size(); ++i) As.coeffRef(i, i) += sigma;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(As);
        if (ldlt.info() != Eigen::Success)
            throw ConvergenceFailure("shift-invert factorization failed");

        if (sym.full_domain()) {
            // constant mode is exact; deflate it and report lambda = 0
            Eigen::VectorXd q = sym.constant_direction();
            ys.push_back(q);
            finish_pair(q, 0.0);
        }
        std::uint64_t rng_state = 0x2545F4914F6CDD1Dull;
        auto next_unit = [&rng_state]() {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            return static_cast<double>(rng_state >> 11) / 9007199254740992.0 - 0.5;
        };
        while (static_cast<int>(out.size()) < k) {
            Eigen::VectorXd y(sym.size());
            for (std::int64_t i = 0; i < sym.size(); ++i) y[i] = next_unit();
            detail::orthogonalize(y, ys);
            y.normalize();
            double lam_prev = std::numeric_limits<double>::infinity();
            double lam = 0.0;
            int it = 0;
            const int max_it = 500;
            for (; it < max_it; ++it) {
                Eigen::VectorXd z = ldlt.solve(y);
                detail::orthogonalize(z, ys);
                double nz = z.norm();
                if (!(nz > 0.0) || !z.allFinite())
                    throw ConvergenceFailure("inverse iteration produced a null vector");
                z /= nz;
                lam = z.dot(sym.matrix() * z);
                if (std::abs(lam - lam_prev) <=
                    1e-13 * std::max(std::abs(lam), sigma) + 1e-300) {
                    y = z;
                    break;
                }
                lam_prev = lam;
                y = z;
            }
            if (it == max_it)
                throw ConvergenceFailure("inverse iteration: no convergence in " +
                                         std::to_string(max_it) + " iterations");
            Eigen::VectorXd r = sym.matrix() * y - lam * y;
            ys.push_back(y);
            finish_pair(y, r.norm());
        }
        std::sort(out.begin(), out.end(),
                  [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
    }
    return out;
}

inline std::vector<EigenPair> low_spectrum(const DiscreteGenerator& gen,
                                           const RegionSpec& domain, int k) {
    return low_spectrum(gen, domain.resolve(gen.grid()), k);
}

/// Smallest generalized eigenvalue with its nonnegative eigenvector,
/// normalized to max = 1.
inline EigenPair principal_eigenvalue(const DiscreteGenerator& gen, const NodeMask& domain) {
    auto pairs = low_spectrum(gen, domain, 1);
    EigenPair p = std::move(pairs.front());
    double mx = 0.0;
    for (double v : p.vector)
        if (std::abs(v) > std::abs(mx)) mx = v;
    if (mx == 0.0) throw ConvergenceFailure("principal eigenvector is zero");
    for (auto& v : p.vector) v /= mx; // also fixes the Perron sign
    return p;
}

inline EigenPair principal_eigenvalue(const DiscreteGenerator& gen, const RegionSpec& domain) {
    return principal_eigenvalue(gen, domain.resolve(gen.grid()));
}

/// Variational upper bound for lambda(Sigma):
///   cap(ball(x), Sigma^c) / mass(A^beta_{x,Sigma^c})
/// with the basin beta-shrunk in communication height.
inline double rayleigh_upper_bound(const DiscreteGenerator& gen, const NodeMask& ball_x,
                                   const NodeMask& sigma, double beta) {
    const auto& grid = gen.grid();
    const std::int64_t n = grid.size();
    NodeMask sigma_c(n, 0);
    bool any_c = false;
    for (std::int64_t i = 0; i < n; ++i) {
        sigma_c[i] = sigma[i] ? 0 : 1;
        any_c |= (sigma_c[i] != 0);
    }
    if (!any_c)
        throw PreconditionViolation("rayleigh_upper_bound: Sigma must have a complement");
    for (std::int64_t i = 0; i < n; ++i)
        if (ball_x[i] && !sigma[i])
            throw PreconditionViolation("rayleigh_upper_bound: ball must lie inside Sigma");

    double cap = capacity(gen, ball_x, sigma_c, 0.0);

    std::vector<std::int64_t> src_ball, src_c;
    for (std::int64_t i = 0; i < n; ++i) {
        if (ball_x[i]) src_ball.push_back(i);
        if (sigma_c[i]) src_c.push_back(i);
    }
    auto f_ball = minimax_distances_from(src_ball, grid);
    auto f_c = minimax_distances_from(src_c, grid);
    double mass = 0.0;
    bool any_strict = false;
    const auto& mu = gen.masses();
    for (std::int64_t i = 0; i < n; ++i) {
        if (!sigma[i]) continue;
        // the source ball belongs to its own basin; elsewhere membership is
        // by strict communication-height comparison
        if (ball_x[i] || f_ball.field[i] < f_c.field[i] - beta) {
            mass += mu[i];
            any_strict |= !ball_x[i];
        }
    }
    if (beta > 0.0 && !any_strict)
        throw EmptyBasin("rayleigh_upper_bound: beta-shrunk basin is empty");
    return cap / mass;
}

struct CapacityMatrix {
    Eigen::MatrixXd k_cap;   // Dirichlet-form pairings of the equilibrium potentials
    Eigen::VectorXd m_mass;  // basin masses
    std::vector<std::vector<double>> equilibria;

    /// Generalized eigenvalues of (K_cap, diag(M)): the |I| small eigenvalues.
    Eigen::VectorXd eigenvalues() const {
        Eigen::MatrixXd M = m_mass.asDiagonal();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k_cap, M);
        return es.eigenvalues();
    }
};

/// K_cap[y][z] = h_y^T (-K) h_z with h_y the committor of (ball_y, other
/// balls); M_mass[y] = mass of basin(y, I \ y).
inline CapacityMatrix capacity_matrix(const DiscreteGenerator& gen,
                                      const std::vector<NodeMask>& balls,
                                      const std::vector<NodeMask>& basins) {
    const int m = static_cast<int>(balls.size());
    if (m < 2) throw PreconditionViolation("capacity_matrix needs at least two balls");
    if (static_cast<int>(basins.size()) != m)
        throw PreconditionViolation("capacity_matrix: one basin per ball required");
    const std::int64_t n = gen.grid().size();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            detail::require_disjoint(balls[i], balls[j]);

    CapacityMatrix out;
    out.k_cap.resize(m, m);
    out.m_mass.resize(m);
    out.equilibria.resize(m);
    for (int y = 0; y < m; ++y) {
        NodeMask others(n, 0);
        for (int z = 0; z < m; ++z)
            if (z != y)
                for (std::int64_t i = 0; i < n; ++i) others[i] |= balls[z][i];
        out.equilibria[y] = solve_equilibrium_potential(gen, balls[y], others, 0.0).field;
        out.m_mass[y] = gen.mass_of(basins[y]);
    }
    for (int y = 0; y < m; ++y)
        for (int z = y; z < m; ++z) {
            double v = gen.dirichlet_pairing(out.equilibria[y], out.equilibria[z]);
            out.k_cap(y, z) = out.k_cap(z, y) = v;
        }
    return out;
}

/// sup over {F < C1} of |phi_x / phi_x(x) - h0_{x, M<x}|: the eigenfunction
/// against the committor toward the minima ordered before x.
inline double eigenfunction_vs_committor(const DiscreteGenerator& gen,
                                         const LandscapeSummary& land,
                                         const MetastableHierarchy& hier, int x, double c1,
                                         double ball_radius) {
    const auto& grid = gen.grid();
    int pos = hier.position(x);
    if (pos <= 0)
        throw PreconditionViolation("eigenfunction_vs_committor: x must not be the "
                                    "global minimum");
    NodeMask full(grid.size(), 1);
    auto pairs = low_spectrum(gen, full, pos + 1);
    const auto& phi = pairs[pos].vector;

    std::int64_t node_x = grid.nearest_node(land.minima[x].location);
    double phix = phi[node_x];
    if (phix == 0.0) throw ConvergenceFailure("eigenfunction vanishes at its minimum");

    std::vector<Vector> targets;
    for (int p = 0; p < pos; ++p) targets.push_back(land.minima[hier.order[p]].location);
    auto a_mask = RegionSpec::ball(land.minima[x].location, ball_radius).resolve(grid);
    auto b_mask = RegionSpec::balls(targets, ball_radius).resolve(grid);
    auto h = solve_equilibrium_potential(gen, a_mask, b_mask, 0.0);

    double sup = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        if (grid.value(i) >= c1) continue;
        sup = std::max(sup, std::abs(phi[i] / phix - h.field[i]));
    }
    return sup;
}

} // namespace metastable

#endif
