#include <catch2/catch_amalgamated.hpp>

#include "metastable/critical_points.hpp"
#include "metastable/potential.hpp"
#include "oracles.hpp"

using namespace metastable;
using Catch::Approx;

TEST_CASE("double well minima at +-1", "[minima]") {
    auto pot = make_double_well();
    GridGraph grid(pot, {401});
    auto res = find_minima(pot, grid);
    REQUIRE(res.minima.size() == 2);
    REQUIRE(res.minima[0].location[0] == Approx(-1.0).margin(1e-9));
    REQUIRE(res.minima[1].location[0] == Approx(1.0).margin(1e-9));
    REQUIRE(res.minima[0].value == Approx(0.0).margin(1e-12));
    for (const auto& m : res.minima) {
        REQUIRE(m.kind == CriticalKind::minimum);
        REQUIRE(m.index == 0);
        double gnorm = pot.grad(m.location).norm();
        REQUIRE(gnorm <= 1e-8 * (1.0 + m.hess_eigenvalues.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("2D product well minima", "[minima]") {
    auto pot = make_product_well_2d();
    GridGraph grid(pot, {151, 101});
    auto res = find_minima(pot, grid);
    REQUIRE(res.minima.size() == 2);
    for (const auto& m : res.minima) {
        REQUIRE(std::abs(std::abs(m.location[0]) - 1.0) < 1e-8);
        REQUIRE(std::abs(m.location[1]) < 1e-8);
    }
}

TEST_CASE("tilted double well minima match the root oracle", "[minima][oracle]") {
    auto pot = make_tilted_double_well(); // (x^2-1)^2 + 0.2 x
    GridGraph grid(pot, {401});
    auto res = find_minima(pot, grid);
    REQUIRE(res.minima.size() == 2);
    // oracle: roots of F' = 4x^3 - 4x + 0.2 with F'' > 0
    auto fp = [](double x) { return 4.0 * x * x * x - 4.0 * x + 0.2; };
    auto roots = oracles::bisect_roots(fp, -2.0, 2.0);
    std::vector<double> minima_roots;
    for (double r : roots)
        if (12.0 * r * r - 4.0 > 0.0) minima_roots.push_back(r);
    REQUIRE(minima_roots.size() == 2);
    REQUIRE(res.minima[0].location[0] == Approx(minima_roots[0]).margin(1e-8));
    REQUIRE(res.minima[1].location[0] == Approx(minima_roots[1]).margin(1e-8));
    REQUIRE(res.minima[0].location[0] == Approx(-1.0243).margin(5e-4));
    REQUIRE(res.minima[1].location[0] == Approx(0.9737).margin(5e-4));
}

TEST_CASE("double well saddle at 0 with curvature -4", "[saddle]") {
    auto pot = make_double_well();
    GridGraph grid(pot, {401});
    auto z = find_saddle_between(pot, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), grid);
    REQUIRE(z.location[0] == Approx(0.0).margin(1e-9));
    REQUIRE(z.value == Approx(1.0).margin(1e-12));
    REQUIRE(z.index == 1);
    REQUIRE(z.kind == CriticalKind::saddle);
    REQUIRE(z.hess_eigenvalues[0] == Approx(-4.0).margin(1e-8));
}

TEST_CASE("2D product well saddle has eigenvalues [-4, 4]", "[saddle]") {
    auto pot = make_product_well_2d();
    GridGraph grid(pot, {151, 101});
    Vector a(2), b(2);
    a << -1.0, 0.0;
    b << 1.0, 0.0;
    auto z = find_saddle_between(pot, a, b, grid);
    REQUIRE(z.location.norm() < 1e-8);
    REQUIRE(z.hess_eigenvalues[0] == Approx(-4.0).margin(1e-8));
    REQUIRE(z.hess_eigenvalues[1] == Approx(4.0).margin(1e-8));
}

TEST_CASE("tilted saddle matches the root oracle and the communication height",
          "[saddle][oracle]") {
    auto pot = make_tilted_double_well();
    GridGraph grid(pot, {401});
    auto z = find_saddle_between(pot, Vector::Constant(1, -1.0243), Vector::Constant(1, 0.9737),
                                 grid);
    auto fp = [](double x) { return 4.0 * x * x * x - 4.0 * x + 0.2; };
    auto roots = oracles::bisect_roots(fp, -0.5, 0.5);
    REQUIRE(roots.size() == 1);
    REQUIRE(12.0 * roots[0] * roots[0] - 4.0 < 0.0); // index checked by sign of F''
    REQUIRE(z.location[0] == Approx(roots[0]).margin(1e-8));
    REQUIRE(z.location[0] == Approx(0.050).margin(5e-4));

    // saddle value equals the minimax communication height up to grid error
    auto na = grid.nearest_node(Vector::Constant(1, -1.0243));
    auto nb = grid.nearest_node(Vector::Constant(1, 0.9737));
    double fhat = communication_height({na}, {nb}, grid);
    double lip = 8.0; // |F'| bound near the saddle region
    REQUIRE(std::abs(z.value - fhat) <= 2.0 * lip * grid.max_spacing());
}

TEST_CASE("degenerate critical point is rejected as a saddle", "[saddle][errors]") {
    // F = -x^4 + x^6: quartic-flat top at 0 (F''(0) = 0), minima at
    // +-sqrt(2/3)
    std::vector<Monomial> terms = {{-1.0, {4}}, {1.0, {6}}};
    auto pot = make_polynomial_potential(1, terms, Box{{-1.2}, {1.2}});
    GridGraph grid(pot, {401});
    double m = std::sqrt(2.0 / 3.0);
    REQUIRE_THROWS_AS(
        find_saddle_between(pot, Vector::Constant(1, -m), Vector::Constant(1, m), grid),
        DegenerateHessian);
}

TEST_CASE("monотone slope has no saddle path target", "[saddle][errors]") {
    // between the two minima of a triple well, the refined point from the
    // wrong seed must still be index 1; an index-0 target cannot happen from
    // the argmax seed, so exercise NotIndexOne via a 2D monkey saddle-free
    // setup: product well along y only (single minimum in x) -- expect
    // refinement to land on an index-0 point and be rejected.
    auto pot = make_polynomial_potential(2, {{1.0, {2, 0}}, {1.0, {0, 2}}},
                                         Box{{-1.0, -1.0}, {1.0, 1.0}});
    GridGraph grid(pot, {41, 41});
    Vector a(2), b(2);
    a << -0.5, 0.0;
    b << 0.5, 0.0;
    REQUIRE_THROWS_AS(find_saddle_between(pot, a, b, grid), NotIndexOne);
}
