#include <catch2/catch_amalgamated.hpp>

#include "metastable/eyring.hpp"
#include "metastable/hierarchy.hpp"
#include "metastable/potential.hpp"
#include "oracles.hpp"

using namespace metastable;
using Catch::Approx;

namespace {

LandscapeSummary double_well_summary(double a = 1.0) {
    auto pot = make_double_well({{"a", a}});
    GridGraph grid(pot, {401});
    return summarize_landscape(pot, grid);
}

Matrix schematic_heights() {
    Matrix h(3, 3);
    h << 0.0, 1.2, 1.2, 1.2, 0.3, 0.9, 1.2, 0.9, 0.5;
    return h;
}

} // namespace

TEST_CASE("gaussian_mass closed forms and quadrature oracle", "[eyring]") {
    // pure Gaussian F = x^2/2: mass = sqrt(2 pi eps) exactly
    CriticalPoint g;
    g.location = Vector::Constant(1, 0.0);
    g.value = 0.0;
    g.hess_eigenvalues = Vector::Constant(1, 1.0);
    g.index = 0;
    g.kind = CriticalKind::minimum;
    for (double eps : {0.05, 0.3}) {
        REQUIRE(gaussian_mass(g, eps) == Approx(std::sqrt(2.0 * M_PI * eps)).epsilon(1e-12));
        double quad = oracles::int_exp_minus([](double x) { return 0.5 * x * x; }, eps, -30.0,
                                             30.0, 200001);
        REQUIRE(gaussian_mass(g, eps) == Approx(quad).epsilon(1e-6));
    }

    // double well minimum at +1, eps = 0.1, d = 1
    auto land = double_well_summary();
    const auto& xp = land.minima[1];
    double mass = gaussian_mass(xp, 0.1);
    REQUIRE(mass == Approx(std::sqrt(2.0 * M_PI * 0.1) / std::sqrt(8.0)).epsilon(1e-10));
    REQUIRE(mass == Approx(0.28025).margin(2e-5));
    // quadrature over the basin x > 0: agreement to O(eps)
    double quad = oracles::int_exp_minus(
        [](double x) { return (x * x - 1.0) * (x * x - 1.0); }, 0.1, 0.0, 2.0, 80001);
    REQUIRE(std::abs(mass / quad - 1.0) < 0.05);

    // 2D product well at (1, 0): (2 pi eps)/sqrt(32)
    auto pot2 = make_product_well_2d();
    GridGraph grid2(pot2, {151, 101});
    auto land2 = summarize_landscape(pot2, grid2);
    double eps = 0.07;
    REQUIRE(gaussian_mass(land2.minima[1], eps) ==
            Approx(2.0 * M_PI * eps / std::sqrt(32.0)).epsilon(1e-9));

    // degenerate Hessian rejected
    CriticalPoint bad = g;
    bad.hess_eigenvalues = Vector::Constant(1, -1.0);
    bad.index = 1;
    REQUIRE_THROWS_AS(gaussian_mass(bad, 0.1), DegenerateHessian);
}

TEST_CASE("eyring_capacity matches the exact 1D oracle", "[eyring][oracle]") {
    auto land = double_well_summary();
    const auto& z = *land.saddles[0][1];
    for (double eps : {0.1, 0.05}) {
        double cap = eyring_capacity(z, eps);
        double exact = oracles::capacity_1d(
            [](double x) { return (x * x - 1.0) * (x * x - 1.0); }, eps, -1.0, 1.0);
        // Theorem error is O(eps log(1/eps)); measured ~2% at eps = 0.1
        REQUIRE(std::abs(cap / exact - 1.0) < 0.05);
    }
    // closed form: (2 pi)^{-1/2} * 4 * sqrt(eps) e^{-1/eps} / sqrt(4)
    double eps = 0.1;
    REQUIRE(eyring_capacity(z, eps) ==
            Approx(std::pow(2.0 * M_PI, -0.5) * 4.0 * std::sqrt(eps) * std::exp(-1.0 / eps) /
                   2.0)
                .epsilon(1e-10));
}

TEST_CASE("2D product-well capacity reduces to eps e^{-1/eps}", "[eyring]") {
    auto pot2 = make_product_well_2d();
    GridGraph grid2(pot2, {151, 101});
    auto land2 = summarize_landscape(pot2, grid2);
    const auto& z = *land2.saddles[0][1];
    REQUIRE(z.hess_eigenvalues[0] == Approx(-4.0).margin(1e-7));
    double eps = 0.1;
    // (2 pi)^0 * 4 * eps * e^{-1/eps} / sqrt(16)
    REQUIRE(eyring_capacity(z, eps) == Approx(eps * std::exp(-1.0 / eps)).epsilon(1e-8));
}

TEST_CASE("capacity scaling under F -> F + c", "[eyring][property]") {
    auto land = double_well_summary();
    CriticalPoint z = *land.saddles[0][1];
    double eps = 0.08;
    double cap0 = eyring_capacity(z, eps);
    CriticalPoint zc = z;
    zc.value += 0.7;
    REQUIRE(eyring_capacity(zc, eps) == Approx(cap0 * std::exp(-0.7 / eps)).epsilon(1e-12));
}

TEST_CASE("kramers_time prefactor and consistency with mass/capacity", "[eyring]") {
    auto land = double_well_summary();
    double eps = 0.1;
    auto ts = kramers_time(1, {0}, land, eps);
    REQUIRE(ts.rate == Approx(1.0).margin(1e-10));
    REQUIRE(ts.prefactor == Approx(2.0 * M_PI / std::sqrt(32.0)).epsilon(1e-10));
    REQUIRE(ts.prefactor == Approx(1.1107).margin(1e-4));
    REQUIRE(ts.value_at(eps) == Approx(1.1107 * std::exp(10.0)).epsilon(1e-4));
    REQUIRE(ts.value_at(eps) == Approx(2.446e4).epsilon(1e-3));

    // identity: T = gaussian_mass / eyring_capacity up to exp(F(x)/eps) bookkeeping
    double mass = gaussian_mass(land.minima[1], eps);
    double cap = eyring_capacity(*land.saddles[0][1], eps);
    REQUIRE(ts.value_at(eps) == Approx(mass / cap).epsilon(1e-12));

    // exact mean-time oracle: agreement within the asymptotic error at eps=0.05
    double oracle = oracles::mean_hitting_time_1d(
        [](double x) { return (x * x - 1.0) * (x * x - 1.0); }, 0.05, -1.0, 1.0, 3.0);
    REQUIRE(std::abs(ts.value_at(0.05) / oracle - 1.0) < 0.05);
}

TEST_CASE("2D kramers prefactor equals the 1D one for the product well", "[eyring]") {
    auto pot2 = make_product_well_2d();
    GridGraph grid2(pot2, {151, 101});
    auto land2 = summarize_landscape(pot2, grid2);
    auto ts = kramers_time(1, {0}, land2, 0.1);
    // 2 pi / 4 * sqrt(16/32) = 1.1107
    REQUIRE(ts.prefactor == Approx(1.1107).margin(1e-4));
}

TEST_CASE("full-target-set convention T_M = eps^{1-d}", "[eyring]") {
    auto land = double_well_summary();
    auto ts = kramers_time(1, {0, 1}, land, 0.1);
    REQUIRE(ts.full_set_convention);
    REQUIRE(ts.value_at(0.1) == Approx(1.0).epsilon(1e-14)); // d = 1
    ts.dim = 2;
    REQUIRE(ts.value_at(0.1) == Approx(10.0).epsilon(1e-14));
}

TEST_CASE("empty targets give an infinite time scale", "[eyring]") {
    auto land = double_well_summary();
    auto ts = kramers_time(0, {}, land, 0.1);
    REQUIRE(ts.infinite);
    REQUIRE(std::isinf(ts.value_at(0.1)));
}

TEST_CASE("hierarchy of a single minimum", "[hierarchy]") {
    auto single = make_polynomial_potential(1, {{1.0, {2}}}, Box{{-2.0}, {2.0}});
    GridGraph grid(single, {401});
    auto land = summarize_landscape(single, grid);
    auto h = build_hierarchy(land, 0.1);
    REQUIRE(h.order.size() == 1);
    REQUIRE(h.t_of[0].infinite);
    REQUIRE(std::isinf(h.rho));
    REQUIRE(!h.genericity_violated);
}

TEST_CASE("symmetric double well violates genericity", "[hierarchy]") {
    auto land = double_well_summary();
    auto h = build_hierarchy(land, 0.1);
    REQUIRE(h.genericity_violated);
    // equal depths: both minima have empty M(x)
    REQUIRE(h.m_of[0].empty());
    REQUIRE(h.m_of[1].empty());
    REQUIRE_THROWS_AS(eigenvalue_prediction(h.order[1], h, 0.1), GenericityViolation);
}

TEST_CASE("schematic triple well hierarchy", "[hierarchy]") {
    auto land = schematic_landscape({0.0, 0.3, 0.5}, schematic_heights());
    auto h = build_hierarchy(land, 0.06);
    REQUIRE(!h.genericity_violated);
    REQUIRE(h.order == std::vector<int>{0, 1, 2});
    REQUIRE(h.m_of[2] == std::vector<int>{0, 1});
    REQUIRE(h.m_of[1] == std::vector<int>{0});
    REQUIRE(h.m_of[0].empty());
    // lambda rates forced by the schematic heights
    REQUIRE(h.t_of[2].rate == Approx(0.9 - 0.5));
    REQUIRE(h.t_of[1].rate == Approx(1.2 - 0.3));
    // full enumeration of competing rate pairs: the gap is attained by
    // rate(m3,{m1}) = 0.7 against rate(m2,{m1,m3}) = 0.6
    REQUIRE(h.rho == Approx(0.1).margin(1e-12));
    // auxiliary scales at rate level
    REQUIRE(h.t_script_rate[2] == Approx(0.9));
    REQUIRE(h.e_script_rate[2] == Approx(0.6));
    REQUIRE(h.e_script_rate[1] == Approx(1.2));
    // Lemma-type ordering: T_script >= E_script >= rho + rate(T_x)
    for (int p = 1; p < 3; ++p) {
        int x = h.order[p];
        REQUIRE(h.t_script_rate[x] >= h.e_script_rate[x] - 1e-12);
        REQUIRE(h.e_script_rate[x] >= h.t_of[x].rate + h.rho - 1e-12);
    }
}

TEST_CASE("eigenvalue prediction inverts the same time scale exactly", "[hierarchy]") {
    auto land = schematic_landscape({0.0, 0.3, 0.5}, schematic_heights());
    auto h = build_hierarchy(land, 0.06);
    REQUIRE(eigenvalue_prediction(0, h, 0.06) == 0.0);
    for (int x : {1, 2}) {
        double lam = eigenvalue_prediction(x, h, 0.06);
        // same TimeScale object on both sides; product is 1 to one rounding
        REQUIRE(lam * h.t_of[x].value_at(0.06) == Approx(1.0).margin(4e-16));
    }
}

TEST_CASE("adding a constant to F changes nothing", "[hierarchy][property]") {
    auto land0 = schematic_landscape({0.0, 0.3, 0.5}, schematic_heights());
    Matrix shifted = schematic_heights().array() + 2.5;
    auto land1 = schematic_landscape({2.5, 2.8, 3.0}, shifted);
    auto h0 = build_hierarchy(land0, 0.06);
    auto h1 = build_hierarchy(land1, 0.06);
    REQUIRE(h0.order == h1.order);
    REQUIRE(h0.rho == Approx(h1.rho).margin(1e-12));
    for (int x = 0; x < 3; ++x) {
        if (h0.t_of[x].infinite) {
            REQUIRE(h1.t_of[x].infinite);
            continue;
        }
        REQUIRE(h0.t_of[x].rate == Approx(h1.t_of[x].rate).margin(1e-12));
        REQUIRE(eigenvalue_prediction(x, h0, 0.06) ==
                Approx(eigenvalue_prediction(x, h1, 0.06)).epsilon(1e-12));
    }
}

TEST_CASE("rescaling F -> cF with eps -> c eps", "[hierarchy][regression]") {
    double c = 2.0, eps = 0.1;
    auto land1 = double_well_summary(1.0);
    auto land2 = double_well_summary(c);
    auto t1 = kramers_time(1, {0}, land1, eps);
    auto t2 = kramers_time(1, {0}, land2, c * eps);
    REQUIRE(t1.rate / eps == Approx(t2.rate / (c * eps)).epsilon(1e-9));
    // d = 1: prefactor scales by 1/c, so lambda scales by c
    REQUIRE(t2.prefactor == Approx(t1.prefactor / c).epsilon(1e-9));
    REQUIRE(1.0 / t2.value_at(c * eps) == Approx(c / t1.value_at(eps)).epsilon(1e-9));
}

TEST_CASE("ultrametric report", "[hierarchy]") {
    Matrix good = schematic_heights();
    REQUIRE(ultrametric_report(good).empty());

    Matrix bad = good;
    bad(0, 2) = bad(2, 0) = 1.0; // 1.2 > max(1.0, 0.9) now violated via z = 2
    auto viol = ultrametric_report(bad);
    REQUIRE(!viol.empty());

    // heights produced by minimax sweeps are ultrametric by construction
    auto pot = make_tilted_double_well();
    GridGraph grid(pot, {201});
    auto land = summarize_landscape(pot, grid);
    REQUIRE(ultrametric_report(land.heights, 0.0).empty());
}

TEST_CASE("non-unique saddle is refused", "[hierarchy][errors]") {
    // symmetric quartic in 2D with two equal-height channels around a bump:
    // emulate via schematic landscape carrying two identical saddles
    auto land = schematic_landscape({0.0, 0.4}, (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.4).finished());
    CriticalPoint z1, z2;
    z1.location = Vector::Constant(1, -3.0);
    z2.location = Vector::Constant(1, 3.0);
    z1.value = z2.value = 1.0;
    z1.hess_eigenvalues = z2.hess_eigenvalues = Vector::Constant(1, -1.0);
    z1.index = z2.index = 1;
    z1.kind = z2.kind = CriticalKind::saddle;
    land.saddles[0][1] = z1;
    land.saddles[1][0] = z1;
    // a second minima pair sharing the same height through a different saddle
    LandscapeSummary multi = land;
    multi.minima.push_back(land.minima[1]);
    multi.minima[2].location = Vector::Constant(1, 5.0);
    multi.heights = Matrix::Constant(3, 3, 1.0);
    multi.heights(0, 0) = 0.0;
    multi.heights(1, 1) = 0.4;
    multi.heights(2, 2) = 0.4;
    multi.saddles.assign(3, std::vector<std::optional<CriticalPoint>>(3));
    multi.saddles[0][1] = multi.saddles[1][0] = z1;
    multi.saddles[0][2] = multi.saddles[2][0] = z2;
    multi.saddles[1][2] = multi.saddles[2][1] = z2;
    REQUIRE_THROWS_AS(kramers_time(0, {1, 2}, multi, 0.1), NonUniqueSaddle);
}
