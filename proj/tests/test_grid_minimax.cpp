#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "metastable/minimax.hpp"
#include "metastable/potential.hpp"
#include "oracles.hpp"

using namespace metastable;
using Catch::Approx;

TEST_CASE("grid samples the potential exactly and wires axis neighbors", "[grid]") {
    auto pot = make_product_well_2d();
    GridGraph grid(pot, {31, 21});
    REQUIRE(grid.size() == 31 * 21);
    std::vector<double> x(2);
    for (std::int64_t i : {std::int64_t(0), std::int64_t(345), grid.size() - 1}) {
        grid.coords(i, x.data());
        REQUIRE(grid.value(i) == pot(x.data()));
    }
    // interior nodes have 2*dim neighbors
    int idx[2] = {15, 10};
    std::int64_t mid = grid.flatten(idx);
    int count = 0;
    grid.for_neighbors(mid, [&](std::int64_t, int) { ++count; });
    REQUIRE(count == 4);
    int corner[2] = {0, 0};
    count = 0;
    grid.for_neighbors(grid.flatten(corner), [&](std::int64_t, int) { ++count; });
    REQUIRE(count == 2);
}

TEST_CASE("double-well communication height is the barrier", "[minimax]") {
    auto pot = make_double_well();
    GridGraph grid(pot, {401});
    auto a = grid.nearest_node(Vector::Constant(1, -1.0));
    auto b = grid.nearest_node(Vector::Constant(1, 1.0));
    double fhat = communication_height({a}, {b}, grid);
    REQUIRE(fhat == Approx(1.0).margin(2.0 * grid.max_spacing() * 8.0));

    // brute force on a coarse 41-node grid
    GridGraph coarse(pot, {41});
    auto ca = coarse.nearest_node(Vector::Constant(1, -1.0));
    auto cb = coarse.nearest_node(Vector::Constant(1, 1.0));
    auto closure = oracles::minimax_closure(coarse);
    REQUIRE(communication_height({ca}, {cb}, coarse) == closure[ca][cb]);
    REQUIRE(closure[ca][cb] == Approx(1.0).margin(0.05));
}

TEST_CASE("single-node and symmetric identities", "[minimax]") {
    auto pot = make_tilted_double_well();
    GridGraph grid(pot, {101});
    auto x = grid.nearest_node(Vector::Constant(1, 0.3));
    // constant curve: Fhat(x, x) = F(x)
    REQUIRE(communication_height({x}, {x}, grid) == grid.value(x));
    auto fx = minimax_distances_from(x, grid);
    REQUIRE(fx.field[x] == grid.value(x));

    auto y = grid.nearest_node(Vector::Constant(1, -0.9));
    auto fy = minimax_distances_from(y, grid);
    // path reversal: distances_from(x)[y] == distances_from(y)[x]
    REQUIRE(fx.field[y] == fy.field[x]);
    // field[y] >= max(F(x), F(y))
    for (std::int64_t i = 0; i < grid.size(); ++i)
        REQUIRE(fx.field[i] >= std::max(grid.value(x), grid.value(i)) - 1e-15);
}

TEST_CASE("minimax field matches exhaustive closure on coarse grids", "[minimax][oracle]") {
    auto pot1 = make_tilted_double_well();
    GridGraph g1(pot1, {41});
    auto closure1 = oracles::minimax_closure(g1);
    for (std::int64_t s : {std::int64_t(0), std::int64_t(17), std::int64_t(40)}) {
        auto mf = minimax_distances_from(s, g1);
        for (std::int64_t i = 0; i < g1.size(); ++i)
            REQUIRE(mf.field[i] == closure1[s][i]);
    }

    auto pot2 = make_product_well_2d();
    GridGraph g2(pot2, {7, 7}); // 49 nodes
    auto closure2 = oracles::minimax_closure(g2);
    for (std::int64_t s = 0; s < g2.size(); s += 11) {
        auto mf = minimax_distances_from(s, g2);
        for (std::int64_t i = 0; i < g2.size(); ++i)
            REQUIRE(mf.field[i] == closure2[s][i]);
    }
}

TEST_CASE("literal path enumeration agrees on a tiny 2D grid", "[minimax][oracle]") {
    auto pot = make_product_well_2d();
    GridGraph g(pot, {4, 3});
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b) {
            auto mf = minimax_distances_from(static_cast<std::int64_t>(a), g);
            REQUIRE(mf.field[b] == oracles::enumerate_paths_minimax(g, a, b));
        }
}

TEST_CASE("ultrametric triangle inequality holds exactly on grids", "[minimax][property]") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Monomial> terms = {{0.5 + 0.5 * std::abs(coeff(rng)), {6}},
                                       {coeff(rng), {4}},
                                       {coeff(rng), {3}},
                                       {2.0 * coeff(rng), {2}},
                                       {coeff(rng), {1}}};
        auto pot = make_polynomial_potential(1, terms, Box{{-2.0}, {2.0}});
        GridGraph grid(pot, {45});
        auto closure = oracles::minimax_closure(grid);
        const int n = static_cast<int>(grid.size());
        std::vector<MinimaxField> fields(n);
        for (int i = 0; i < n; ++i) fields[i] = minimax_distances_from(std::int64_t(i), grid);
        for (int a = 0; a < n; a += 5)
            for (int b = 0; b < n; b += 7)
                for (int c = 0; c < n; c += 3) {
                    double ab = fields[a].field[b];
                    REQUIRE(ab == closure[a][b]);
                    REQUIRE(ab <= std::max(fields[a].field[c], fields[c].field[b]) + 0.0);
                }
    }
}

TEST_CASE("2D separable heights reduce to 1D plus the transverse minimum", "[minimax]") {
    auto pot2 = make_product_well_2d(); // (x^2-1)^2 + 2 y^2, g(y_min) = 0
    GridGraph g2(pot2, {81, 41});
    Vector a(2), b(2);
    a << -1.0, 0.0;
    b << 1.0, 0.0;
    double h2 = communication_height({g2.nearest_node(a)}, {g2.nearest_node(b)}, g2);

    auto pot1 = make_double_well();
    GridGraph g1(pot1, {81});
    double h1 = communication_height({g1.nearest_node(Vector::Constant(1, -1.0))},
                                     {g1.nearest_node(Vector::Constant(1, 1.0))}, g1);
    REQUIRE(h2 == Approx(h1).margin(8.0 * g2.max_spacing()));
}

TEST_CASE("basins split the double well at the saddle", "[basin]") {
    auto pot = make_double_well();
    GridGraph grid(pot, {401}); // odd count: x = 0 is a node
    auto xm = grid.nearest_node(Vector::Constant(1, -1.0));
    auto xp = grid.nearest_node(Vector::Constant(1, 1.0));
    auto mask = basin(xm, {xp}, grid);
    std::vector<double> x(1);
    std::int64_t in_count = 0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, x.data());
        // left of the saddle and below the barrier: in the -1 basin; on the
        // outer slopes Fhat ties exactly (both heights equal F(y)), so the
        // node belongs to neither basin
        if (x[0] < -1e-9 && grid.value(i) < 1.0 - 1e-9) REQUIRE(mask[i] == 1);
        if (x[0] < -1e-9 && grid.value(i) > 1.0 + 1e-9) REQUIRE(mask[i] == 0);
        if (x[0] > 1e-9) REQUIRE(mask[i] == 0);
        in_count += mask[i];
    }
    // exact tie at the saddle node: assigned to neither basin
    auto saddle = grid.nearest_node(Vector::Constant(1, 0.0));
    REQUIRE(mask[saddle] == 0);
    auto mask_p = basin(xp, {xm}, grid);
    REQUIRE(mask_p[saddle] == 0);
    REQUIRE(in_count > 0);

    // empty I: whole box
    auto full = basin(xm, {}, grid);
    for (std::int64_t i = 0; i < grid.size(); ++i) REQUIRE(full[i] == 1);
}

TEST_CASE("check_assumptions measures the confining gradient", "[assumptions]") {
    auto pot = make_double_well();
    GridGraph grid(pot, {801});
    auto rep = check_assumptions(pot, 2.0, grid);
    REQUIRE(!rep.violated);
    REQUIRE(rep.c_measured > 0.0);
    // oracle: scan |F'| = |4x(x^2-1)| over {F > 2} on the same grid
    double expect = std::numeric_limits<double>::infinity();
    std::vector<double> x(1);
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        if (grid.value(i) <= 2.0) continue;
        grid.coords(i, x.data());
        expect = std::min(expect, std::abs(4.0 * x[0] * (x[0] * x[0] - 1.0)));
    }
    REQUIRE(rep.c_measured == Approx(expect));

    // single well F = x^2: |F'| = 2|x|, infimum on {F > 1} attained at |x| = 1
    auto single = make_polynomial_potential(1, {{1.0, {2}}}, Box{{-3.0}, {3.0}});
    GridGraph gs(single, {601});
    auto rs = check_assumptions(single, 1.0, gs);
    REQUIRE(rs.c_measured == Approx(2.0).margin(0.05));

    // flat shelf above C1 violates the assumption
    auto shelf = make_polynomial_potential(1, {{1.0, {0}}}, Box{{-1.0}, {1.0}});
    GridGraph gf(shelf, {51});
    auto rf = check_assumptions(shelf, 0.5, gf);
    REQUIRE(rf.violated);
}
