#ifndef METASTABLE_DIRICHLET_HPP
#define METASTABLE_DIRICHLET_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include "metastable/errors.hpp"
#include "metastable/generator.hpp"
#include "metastable/region.hpp"

namespace metastable {

/// Interior solver for (-K - lambda M) restricted to the complement of a
/// fixed node set. The system is symmetrically diagonal-scaled before
/// factorization; conductances span hundreds of orders of magnitude and
/// unscaled factorizations lose the committor entirely at small eps.
class DirichletOperator {
public:
    static constexpr std::int64_t kDirectLimit = 30000;
    static constexpr double kResidualTol = 1e-12;

    DirichletOperator(const DiscreteGenerator& gen, NodeMask fixed, double lambda = 0.0)
        : gen_(&gen), fixed_(std::move(fixed)), lambda_(lambda) {
        const std::int64_t n = gen.grid().size();
        if (static_cast<std::int64_t>(fixed_.size()) != n)
            throw PreconditionViolation("fixed mask size mismatch");
        index_of_.assign(n, -1);
        for (std::int64_t i = 0; i < n; ++i)
            if (!fixed_[i]) {
                index_of_[i] = n_int_;
                interior_.push_back(i);
                ++n_int_;
            }
        if (n_int_ == 0) throw SingularSystem("Dirichlet complement is empty");
        bool any_fixed = n_int_ < n;
        if (!any_fixed && lambda_ == 0.0)
            throw SingularSystem("no boundary nodes: operator is singular");

        std::vector<Eigen::Triplet<double>> trips;
        const auto& mu = gen.masses();
        std::vector<double> diag(n_int_, 0.0);
        for (const auto& e : gen.edges()) {
            std::int64_t a = index_of_[e.i], b = index_of_[e.j];
            if (a >= 0) diag[a] += e.w;
            if (b >= 0) diag[b] += e.w;
            if (a >= 0 && b >= 0) {
                trips.emplace_back(a, b, -e.w);
                trips.emplace_back(b, a, -e.w);
            }
        }
        for (std::int64_t k = 0; k < n_int_; ++k) {
            double d = diag[k] - lambda_ * mu[interior_[k]];
            trips.emplace_back(k, k, d);
        }
        A_.resize(n_int_, n_int_);
        A_.setFromTriplets(trips.begin(), trips.end());
        A_.makeCompressed();

        scale_.resize(n_int_);
        for (std::int64_t k = 0; k < n_int_; ++k) {
            double d = A_.coeff(k, k);
            if (!(d > 0.0)) {
                if (lambda_ > 0.0)
                    throw IndefiniteSystem("lambda at or above the principal eigenvalue");
                d = std::abs(d) > 0 ? std::abs(d) : 1.0;
            }
            scale_[k] = 1.0 / std::sqrt(d);
        }
        As_.resize(n_int_, n_int_);
        {
            std::vector<Eigen::Triplet<double>> st;
            st.reserve(A_.nonZeros());
            for (int k = 0; k < A_.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(A_, k); it; ++it)
                    st.emplace_back(it.row(), it.col(),
                                    it.value() * scale_[it.row()] * scale_[it.col()]);
            As_.setFromTriplets(st.begin(), st.end());
            As_.makeCompressed();
        }

        if (n_int_ <= kDirectLimit) {
            ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>();
            ldlt_->compute(As_);
            if (ldlt_->info() != Eigen::Success)
                throw ConvergenceFailure("sparse factorization failed");
            if (lambda_ > 0.0) {
                const auto& D = ldlt_->vectorD();
                for (std::int64_t k = 0; k < n_int_; ++k)
                    if (!(D[k] > 0.0))
                        throw IndefiniteSystem("lambda at or above the principal eigenvalue");
            }
        } else {
            cg_ = std::make_unique<Eigen::ConjugateGradient<SparseMatrix,
                                                            Eigen::Lower | Eigen::Upper>>();
            cg_->setTolerance(kResidualTol);
            cg_->setMaxIterations(20000);
            cg_->compute(As_);
        }
    }

    std::int64_t interior_count() const { return n_int_; }
    const std::vector<std::int64_t>& interior() const { return interior_; }
    double lambda() const { return lambda_; }
    double last_residual() const { return last_residual_; }

    /// Solve (-K - lambda M) h = rhs on the interior with h = bc on the
    /// fixed set; rhs and bc are full-size node vectors.
    std::vector<double> solve(const std::vector<double>& rhs_full,
                              const std::vector<double>& bc_full) const {
        const std::int64_t n = gen_->grid().size();
        Eigen::VectorXd rhs(n_int_);
        for (std::int64_t k = 0; k < n_int_; ++k) rhs[k] = rhs_full[interior_[k]];
        // move boundary values to the right-hand side
        for (const auto& e : gen_->edges()) {
            std::int64_t a = index_of_[e.i], b = index_of_[e.j];
            if (a >= 0 && b < 0) rhs[a] += e.w * bc_full[e.j];
            if (b >= 0 && a < 0) rhs[b] += e.w * bc_full[e.i];
        }

        Eigen::VectorXd x = solve_scaled(rhs);
        for (int round = 0; round < 3; ++round) {
            Eigen::VectorXd r = rhs - A_ * x;
            double rel = r.norm() / std::max(rhs.norm(), 1e-300);
            last_residual_ = rel;
            if (rel <= kResidualTol) break;
            x += solve_scaled(r);
        }
        {
            Eigen::VectorXd r = rhs - A_ * x;
            last_residual_ = r.norm() / std::max(rhs.norm(), 1e-300);
        }

        std::vector<double> out(n);
        for (std::int64_t i = 0; i < n; ++i) out[i] = fixed_[i] ? bc_full[i] : 0.0;
        for (std::int64_t k = 0; k < n_int_; ++k) out[interior_[k]] = x[k];
        return out;
    }

private:
    Eigen::VectorXd solve_scaled(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd b(n_int_);
        for (std::int64_t k = 0; k < n_int_; ++k) b[k] = rhs[k] * scale_[k];
        Eigen::VectorXd y;
        if (ldlt_) {
            y = ldlt_->solve(b);
        } else {
            y = cg_->solve(b);
            if (cg_->info() != Eigen::Success && cg_->error() > 1e-8)
                throw ConvergenceFailure("conjugate gradient stalled, error " +
                                         std::to_string(cg_->error()));
        }
        for (std::int64_t k = 0; k < n_int_; ++k) y[k] *= scale_[k];
        return y;
    }

    const DiscreteGenerator* gen_;
    NodeMask fixed_;
    double lambda_ = 0.0;
    std::int64_t n_int_ = 0;
    std::vector<std::int64_t> interior_;
    std::vector<std::int64_t> index_of_;
    std::vector<double> scale_;
    SparseMatrix A_, As_;
    std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
    std::unique_ptr<Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper>> cg_;
    mutable double last_residual_ = 0.0;
};

struct DirichletSolution {
    std::vector<double> field;
    NodeMask a_mask, b_mask;
    double lambda = 0.0;
    double residual = 0.0;
};

namespace detail {
inline void require_disjoint(const NodeMask& a, const NodeMask& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) throw PreconditionViolation("regions A and B must be disjoint");
}
} // namespace detail

/// Equilibrium potential / committor: (L - lambda) h = 0 off A u B,
/// h = 1 on A, h = 0 on B.
inline DirichletSolution solve_equilibrium_potential(const DiscreteGenerator& gen,
                                                     const NodeMask& a, const NodeMask& b,
                                                     double lambda = 0.0) {
    detail::require_disjoint(a, b);
    const std::int64_t n = gen.grid().size();
    NodeMask fixed(n, 0);
    for (std::int64_t i = 0; i < n; ++i) fixed[i] = a[i] || b[i];
    DirichletOperator op(gen, fixed, lambda);
    std::vector<double> bc(n, 0.0), rhs(n, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
        if (a[i]) bc[i] = 1.0;
    DirichletSolution sol;
    sol.field = op.solve(rhs, bc);
    sol.a_mask = a;
    sol.b_mask = b;
    sol.lambda = lambda;
    sol.residual = op.last_residual();
    return sol;
}

inline DirichletSolution solve_equilibrium_potential(const DiscreteGenerator& gen,
                                                     const RegionSpec& a, const RegionSpec& b,
                                                     double lambda = 0.0) {
    return solve_equilibrium_potential(gen, a.resolve(gen.grid()), b.resolve(gen.grid()),
                                       lambda);
}

/// cap(A, B) as the Dirichlet-form energy of the equilibrium potential.
inline double capacity(const DiscreteGenerator& gen, const NodeMask& a, const NodeMask& b,
                       double lambda = 0.0) {
    if (lambda != 0.0)
        throw PreconditionViolation("nonzero-lambda capacity is not supported");
    auto sol = solve_equilibrium_potential(gen, a, b, 0.0);
    return gen.dirichlet_form(sol.field);
}

inline double capacity(const DiscreteGenerator& gen, const RegionSpec& a, const RegionSpec& b,
                       double lambda = 0.0) {
    return capacity(gen, a.resolve(gen.grid()), b.resolve(gen.grid()), lambda);
}

/// Discrete boundary-flux form of the capacity: sum over A of (-K h).
/// Equals the energy form by the discrete Green formula.
inline double capacity_flux(const DiscreteGenerator& gen, const DirichletSolution& sol) {
    double s = 0.0;
    for (const auto& e : gen.edges()) {
        bool ia = sol.a_mask[e.i], ja = sol.a_mask[e.j];
        if (ia && !ja) s += e.w * (sol.field[e.i] - sol.field[e.j]);
        if (ja && !ia) s += e.w * (sol.field[e.j] - sol.field[e.i]);
    }
    return s;
}

/// w with L w = 1 off B, w = 0 on B: the expected hitting time field.
inline std::vector<double> expected_hitting_time_field(const DiscreteGenerator& gen,
                                                       const NodeMask& b) {
    const std::int64_t n = gen.grid().size();
    if (mask_count(b) == 0) throw SingularSystem("hitting target is empty");
    DirichletOperator op(gen, b, 0.0);
    std::vector<double> bc(n, 0.0);
    std::vector<double> rhs(gen.masses()); // (−K) w = M 1
    return op.solve(rhs, bc);
}

inline std::vector<double> expected_hitting_time_field(const DiscreteGenerator& gen,
                                                       const RegionSpec& b) {
    return expected_hitting_time_field(gen, b.resolve(gen.grid()));
}

/// w with (L - lambda) w = h^lambda_{A,B} off A u B, w = 0 on A u B.
inline std::vector<double> poisson_w(const DiscreteGenerator& gen, const NodeMask& a,
                                     const NodeMask& b, double lambda = 0.0) {
    detail::require_disjoint(a, b);
    auto h = solve_equilibrium_potential(gen, a, b, lambda);
    const std::int64_t n = gen.grid().size();
    NodeMask fixed(n, 0);
    for (std::int64_t i = 0; i < n; ++i) fixed[i] = a[i] || b[i];
    DirichletOperator op(gen, fixed, lambda);
    std::vector<double> bc(n, 0.0), rhs(n, 0.0);
    const auto& mu = gen.masses();
    for (std::int64_t i = 0; i < n; ++i) rhs[i] = mu[i] * h.field[i];
    return op.solve(rhs, bc);
}

inline std::vector<double> poisson_w(const DiscreteGenerator& gen, const RegionSpec& a,
                                     const RegionSpec& b, double lambda = 0.0) {
    return poisson_w(gen, a.resolve(gen.grid()), b.resolve(gen.grid()), lambda);
}

/// s0 = sup over K of w0/h0; 1/s0 is a certified lower bound for the
/// principal Dirichlet eigenvalue of the complement of A u B.
inline double s_zero(const DiscreteGenerator& gen, const NodeMask& a, const NodeMask& b,
                     const NodeMask& k_mask) {
    auto h = solve_equilibrium_potential(gen, a, b, 0.0);
    auto w = poisson_w(gen, a, b, 0.0);
    const std::int64_t n = gen.grid().size();
    double s = 0.0;
    bool any = false;
    for (std::int64_t i = 0; i < n; ++i) {
        if (!k_mask[i] || a[i] || b[i]) continue;
        if (h.field[i] == 0.0)
            throw DivisionRegion("equilibrium potential vanishes on K");
        any = true;
        s = std::max(s, w[i] / h.field[i]);
    }
    if (!any) throw DivisionRegion("K contains no interior nodes");
    return s;
}

/// Default K: all nodes off A u B where the committor is representable.
inline NodeMask s_zero_default_mask(const DiscreteGenerator& gen, const NodeMask& a,
                                    const NodeMask& b, double floor = 1e-280) {
    auto h = solve_equilibrium_potential(gen, a, b, 0.0);
    const std::int64_t n = gen.grid().size();
    NodeMask k(n, 0);
    for (std::int64_t i = 0; i < n; ++i)
        k[i] = (!a[i] && !b[i] && h.field[i] > floor) ? 1 : 0;
    return k;
}

} // namespace metastable

#endif
