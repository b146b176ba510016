#ifndef METASTABLE_POTENTIAL_HPP
#define METASTABLE_POTENTIAL_HPP

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metastable/errors.hpp"

namespace metastable {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box in R^d.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const double* x) const {
        for (int a = 0; a < dim(); ++a)
            if (x[a] < lo[a] || x[a] > hi[a]) return false;
        return true;
    }
};

/// A smooth scalar field on R^d with gradient and Hessian access.
/// Gradient/Hessian callbacks write into caller-provided storage so the
/// sampler can evaluate them in a tight loop without allocation.
class Potential {
public:
    using EvalFn = std::function<double(const double*)>;
    using GradFn = std::function<void(const double*, double*)>;
    using HessFn = std::function<void(const double*, double*)>; // row-major d*d

    Potential() = default;
    Potential(int dim, Box box, EvalFn eval, GradFn grad, HessFn hess,
              std::string name = "custom")
        : dim_(dim), box_(std::move(box)), eval_(std::move(eval)),
          grad_(std::move(grad)), hess_(std::move(hess)), name_(std::move(name)) {}

    int dim() const { return dim_; }
    const Box& domain_box() const { return box_; }
    const std::string& name() const { return name_; }

    double operator()(const double* x) const { return eval_(x); }
    double operator()(const Vector& x) const { return eval_(x.data()); }

    void grad_into(const double* x, double* out) const { grad_(x, out); }
    Vector grad(const Vector& x) const {
        Vector g(dim_);
        grad_(x.data(), g.data());
        return g;
    }

    void hess_into(const double* x, double* out) const { hess_(x, out); }
    Matrix hess(const Vector& x) const {
        Matrix h(dim_, dim_);
        hess_(x.data(), h.data()); // symmetric, so storage order is immaterial
        return h;
    }

private:
    int dim_ = 0;
    Box box_;
    EvalFn eval_;
    GradFn grad_;
    HessFn hess_;
    std::string name_;
};

/// One monomial of a polynomial potential: coeff * prod_a x_a^{exp[a]}.
struct Monomial {
    double coeff = 0.0;
    std::vector<int> exponents;
};

namespace detail {

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

} // namespace detail

/// Generic polynomial potential from a coefficient table.
inline Potential make_polynomial_potential(int dim, std::vector<Monomial> terms, Box box,
                                           std::string name = "polynomial") {
    for (const auto& t : terms)
        if (static_cast<int>(t.exponents.size()) != dim)
            throw ValidationError("polynomial term has wrong number of exponents");

    auto eval = [dim, terms](const double* x) {
        double s = 0.0;
        for (const auto& t : terms) {
            double m = t.coeff;
            for (int a = 0; a < dim; ++a) m *= detail::ipow(x[a], t.exponents[a]);
            s += m;
        }
        return s;
    };
    auto grad = [dim, terms](const double* x, double* g) {
        for (int a = 0; a < dim; ++a) g[a] = 0.0;
        for (const auto& t : terms) {
            for (int a = 0; a < dim; ++a) {
                int e = t.exponents[a];
                if (e == 0) continue;
                double m = t.coeff * e * detail::ipow(x[a], e - 1);
                for (int b = 0; b < dim; ++b)
                    if (b != a) m *= detail::ipow(x[b], t.exponents[b]);
                g[a] += m;
            }
        }
    };
    auto hess = [dim, terms](const double* x, double* h) {
        for (int i = 0; i < dim * dim; ++i) h[i] = 0.0;
        for (const auto& t : terms) {
            for (int a = 0; a < dim; ++a) {
                for (int b = a; b < dim; ++b) {
                    double m = t.coeff;
                    if (a == b) {
                        int e = t.exponents[a];
                        if (e < 2) continue;
                        m *= e * (e - 1) * detail::ipow(x[a], e - 2);
                        for (int cb = 0; cb < dim; ++cb)
                            if (cb != a) m *= detail::ipow(x[cb], t.exponents[cb]);
                    } else {
                        int ea = t.exponents[a], eb = t.exponents[b];
                        if (ea == 0 || eb == 0) continue;
                        m *= ea * detail::ipow(x[a], ea - 1);
                        m *= eb * detail::ipow(x[b], eb - 1);
                        for (int cb = 0; cb < dim; ++cb)
                            if (cb != a && cb != b) m *= detail::ipow(x[cb], t.exponents[cb]);
                    }
                    h[a * dim + b] += m;
                    if (a != b) h[b * dim + a] += m;
                }
            }
        }
    };
    return Potential(dim, std::move(box), eval, grad, hess, std::move(name));
}

using ParamMap = std::map<std::string, double>;

namespace detail {
inline double param_or(const ParamMap& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}
} // namespace detail

/// a*(x^2-1)^2
inline Potential make_double_well(const ParamMap& params = {}, Box box = {{-2.0}, {2.0}}) {
    double a = detail::param_or(params, "a", 1.0);
    auto eval = [a](const double* x) {
        double u = x[0] * x[0] - 1.0;
        return a * u * u;
    };
    auto grad = [a](const double* x, double* g) {
        g[0] = 4.0 * a * x[0] * (x[0] * x[0] - 1.0);
    };
    auto hess = [a](const double* x, double* h) { h[0] = a * (12.0 * x[0] * x[0] - 4.0); };
    return Potential(1, std::move(box), eval, grad, hess, "double_well");
}

/// a*(x^2-1)^2 + b*x
inline Potential make_tilted_double_well(const ParamMap& params = {},
                                         Box box = {{-2.0}, {2.0}}) {
    double a = detail::param_or(params, "a", 1.0);
    double b = detail::param_or(params, "b", 0.2);
    auto eval = [a, b](const double* x) {
        double u = x[0] * x[0] - 1.0;
        return a * u * u + b * x[0];
    };
    auto grad = [a, b](const double* x, double* g) {
        g[0] = 4.0 * a * x[0] * (x[0] * x[0] - 1.0) + b;
    };
    auto hess = [a](const double* x, double* h) { h[0] = a * (12.0 * x[0] * x[0] - 4.0); };
    return Potential(1, std::move(box), eval, grad, hess, "tilted_double_well");
}

/// a*(x^2-1)^2 + c*y^2
inline Potential make_product_well_2d(const ParamMap& params = {},
                                      Box box = {{-1.8, -1.2}, {1.8, 1.2}}) {
    double a = detail::param_or(params, "a", 1.0);
    double c = detail::param_or(params, "c", 2.0);
    auto eval = [a, c](const double* x) {
        double u = x[0] * x[0] - 1.0;
        return a * u * u + c * x[1] * x[1];
    };
    auto grad = [a, c](const double* x, double* g) {
        g[0] = 4.0 * a * x[0] * (x[0] * x[0] - 1.0);
        g[1] = 2.0 * c * x[1];
    };
    auto hess = [a, c](const double* x, double* h) {
        h[0] = a * (12.0 * x[0] * x[0] - 4.0);
        h[1] = h[2] = 0.0;
        h[3] = 2.0 * c;
    };
    return Potential(2, std::move(box), eval, grad, hess, "product_well_2d");
}

inline std::vector<std::string> potential_registry_names() {
    return {"double_well", "tilted_double_well", "product_well_2d", "polynomial"};
}

/// Built-in potential registry. Polynomial potentials carry their terms
/// separately; the ParamMap covers the analytic builtins.
inline Potential make_potential(const std::string& name, const ParamMap& params = {},
                                const std::vector<Monomial>& terms = {},
                                const Box* box_override = nullptr) {
    auto with_box = [&](Potential p) {
        if (!box_override) return p;
        return Potential(p.dim(), *box_override,
                         [p](const double* x) { return p(x); },
                         [p](const double* x, double* g) { p.grad_into(x, g); },
                         [p](const double* x, double* h) { p.hess_into(x, h); }, p.name());
    };
    if (name == "double_well") return with_box(make_double_well(params));
    if (name == "tilted_double_well") return with_box(make_tilted_double_well(params));
    if (name == "product_well_2d") return with_box(make_product_well_2d(params));
    if (name == "polynomial") {
        if (terms.empty()) throw ValidationError("polynomial potential needs at least one term");
        int dim = static_cast<int>(terms.front().exponents.size());
        Box box = box_override ? *box_override
                               : Box{std::vector<double>(dim, -2.0), std::vector<double>(dim, 2.0)};
        return make_polynomial_potential(dim, terms, std::move(box));
    }
    std::ostringstream msg;
    msg << "unknown potential '" << name << "'; registry:";
    for (const auto& n : potential_registry_names()) msg << " " << n;
    throw ValidationError(msg.str());
}

} // namespace metastable

#endif
