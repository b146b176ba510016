#include <catch2/catch_amalgamated.hpp>

#include "metastable/potential.hpp"

using namespace metastable;
using Catch::Approx;

namespace {

// central finite differences of eval
Vector fd_grad(const Potential& p, const Vector& x, double h = 1e-4) {
    Vector g(p.dim());
    for (int a = 0; a < p.dim(); ++a) {
        Vector xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        g[a] = (p(xp) - p(xm)) / (2.0 * h);
    }
    return g;
}

} // namespace

TEST_CASE("builtin gradients match finite differences", "[potential]") {
    std::vector<Potential> pots = {
        make_double_well(), make_tilted_double_well({{"a", 0.5}, {"b", 0.2}}),
        make_product_well_2d(),
        make_polynomial_potential(1, {{1.0, {4}}, {-2.0, {2}}, {0.3, {1}}, {1.0, {0}}},
                                  Box{{-2.0}, {2.0}})};
    for (const auto& p : pots) {
        for (double t : {-1.3, -0.4, 0.7, 1.1}) {
            Vector x = Vector::Constant(p.dim(), t);
            Vector g = p.grad(x);
            Vector gfd = fd_grad(p, x);
            for (int a = 0; a < p.dim(); ++a)
                REQUIRE(g[a] == Approx(gfd[a]).margin(1e-5 * (1.0 + std::abs(g[a]))));
        }
    }
}

TEST_CASE("builtin hessians are symmetric and match gradient differences", "[potential]") {
    auto p = make_product_well_2d({{"a", 1.0}, {"c", 2.0}});
    Vector x(2);
    x << 0.7, -0.4;
    Matrix h = p.hess(x);
    REQUIRE(std::abs(h(0, 1) - h(1, 0)) < 1e-10);
    // d/dy of grad_x is 0 for the separable well
    REQUIRE(h(0, 1) == Approx(0.0).margin(1e-12));
    REQUIRE(h(1, 1) == Approx(4.0));
}

TEST_CASE("polynomial potential evaluates its monomials", "[potential]") {
    // x^4 - 2x^2 + 0.3x + 1
    auto p = make_polynomial_potential(1, {{1.0, {4}}, {-2.0, {2}}, {0.3, {1}}, {1.0, {0}}},
                                       Box{{-2.0}, {2.0}});
    Vector x(1);
    x << 1.5;
    REQUIRE(p(x) == Approx(std::pow(1.5, 4) - 2.0 * 2.25 + 0.45 + 1.0));
    Vector g = p.grad(x);
    REQUIRE(g[0] == Approx(4.0 * std::pow(1.5, 3) - 4.0 * 1.5 + 0.3));
    REQUIRE(p.hess(x)(0, 0) == Approx(12.0 * 2.25 - 4.0));
}

TEST_CASE("2D polynomial cross terms differentiate correctly", "[potential]") {
    // x^2 y + 3 x y^3
    auto p = make_polynomial_potential(2, {{1.0, {2, 1}}, {3.0, {1, 3}}},
                                       Box{{-2.0, -2.0}, {2.0, 2.0}});
    Vector x(2);
    x << 1.2, -0.7;
    Vector g = p.grad(x);
    REQUIRE(g[0] == Approx(2.0 * 1.2 * -0.7 + 3.0 * std::pow(-0.7, 3)));
    REQUIRE(g[1] == Approx(1.2 * 1.2 + 9.0 * 1.2 * 0.49));
    Matrix h = p.hess(x);
    REQUIRE(h(0, 1) == Approx(2.0 * 1.2 + 9.0 * 0.49));
    REQUIRE(h(0, 1) == Approx(h(1, 0)));
    Vector gfd = fd_grad(p, x);
    REQUIRE(g[0] == Approx(gfd[0]).margin(1e-5));
    REQUIRE(g[1] == Approx(gfd[1]).margin(1e-5));
}

TEST_CASE("registry rejects unknown names with the list", "[potential]") {
    REQUIRE_THROWS_AS(make_potential("quartic_well"), ValidationError);
    try {
        make_potential("quartic_well");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("double_well") != std::string::npos);
        REQUIRE(msg.find("polynomial") != std::string::npos);
    }
}

TEST_CASE("registry forwards parameters", "[potential]") {
    auto p = make_potential("double_well", {{"a", 0.5}});
    Vector x(1);
    x << 0.0;
    REQUIRE(p(x) == Approx(0.5));
}
