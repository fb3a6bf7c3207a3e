#include <doctest.h>

#include <cmath>
#include <random>

#include "freeconv/dwsolver.hpp"

using namespace freeconv;

TEST_CASE("affine contraction converges to its fixed point") {
    SelfMap m{[](cplx w) { return (w + cplx(0, 1)) / 2.0; }, Domain::UpperHalfPlane, "affine"};
    auto [w, rep] = dw_point(m, cplx(0, 5), 1e-13);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(std::abs(w - cplx(0, 1)) < 1e-12);
    CHECK(rep.residual <= rep.tolerance);
}

TEST_CASE("constant maps land immediately") {
    cplx a(0.7, 0.4);
    SelfMap m{[a](cplx) { return a; }, Domain::UpperHalfPlane, "const"};
    auto [w, rep] = dw_point(m, cplx(0, 1), 1e-13);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(std::abs(w - a) == doctest::Approx(0.0));
    CHECK(rep.iterations <= 3);
}

TEST_CASE("parabolic boundary point reaches the axis with the flag set") {
    // w -> w/(1+w) has its attracting point at 0 with derivative 1 there
    SelfMap m{[](cplx w) { return w / (1.0 + w); }, Domain::UpperHalfPlane, "parabolic"};
    auto [w, rep] = dw_point(m, cplx(0.4, 1.5), 1e-13);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(std::abs(w) < 1e-5);
    CHECK(rep.boundary_flag);
}

TEST_CASE("exponential escape is reported as divergence") {
    SelfMap m{[](cplx w) { return 2.0 * w + cplx(0, 1); }, Domain::UpperHalfPlane, "escape"};
    auto [w, rep] = dw_point(m, cplx(0, 1), 1e-13, 5000);
    (void)w;
    CHECK(rep.status == SolveStatus::Diverged);
}

TEST_CASE("uniqueness: five random starts agree within 10 tol") {
    // a genuinely nonlinear self-map of H+: Cauchy-transform style
    auto f = [](cplx w) { return cplx(0.3, 0.9) + 0.5 * w + 0.2 / (cplx(0, 1) - w); };
    SelfMap m{f, Domain::UpperHalfPlane, "mix"};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.1, 5.0);
    const double tol = 1e-12;
    cplx first;
    for (int i = 0; i < 5; ++i) {
        auto [w, rep] = dw_point(m, cplx(re(rng), im(rng)), tol);
        REQUIRE(rep.status == SolveStatus::Converged);
        if (i == 0) first = w;
        CHECK(std::abs(w - first) < 10 * tol);
    }
}

TEST_CASE("invalid inputs are rejected") {
    SelfMap m{[](cplx w) { return w / 2.0 + cplx(0, 1); }, Domain::UpperHalfPlane, "x"};
    CHECK_THROWS_AS(dw_point(m, cplx(0, -1), 1e-12), std::domain_error);
    CHECK_THROWS_AS(dw_point(m, cplx(0, 1), 0.0), std::invalid_argument);
}

TEST_CASE("self-map closure check catches bad maps") {
    SelfMap good{[](cplx w) { return w / 2.0 + cplx(0, 1); }, Domain::UpperHalfPlane, "good"};
    CHECK(good.maps_into_closure());
    SelfMap bad{[](cplx w) { return std::conj(w); }, Domain::UpperHalfPlane, "bad"};
    CHECK_FALSE(bad.maps_into_closure());
}

TEST_CASE("grid sweep warm starts match cold solves within 2 tol") {
    auto family = [](cplx z, cplx w) { return z + 0.4 * w + 0.1 / (cplx(0, 2) - w); };
    std::vector<cplx> grid;
    for (int k = 0; k < 100; ++k) grid.push_back(cplx(-1.0 + 0.02 * k, 0.5 + 0.003 * k));
    const double tol = 1e-12;
    auto swept = dw_point_grid(family, Domain::UpperHalfPlane, grid, cplx(0, 1), tol);
    for (size_t i = 0; i < grid.size(); ++i) {
        SelfMap m{[&family, z = grid[i]](cplx w) { return family(z, w); }, Domain::UpperHalfPlane, "pt"};
        auto [w, rep] = dw_point(m, cplx(0, 1), tol);
        REQUIRE(rep.status == SolveStatus::Converged);
        CHECK(std::abs(w - swept[i].value) <= 2 * tol);
    }
}

TEST_CASE("grid sweep of one point equals the single solve") {
    auto family = [](cplx z, cplx w) { return z + w / 3.0; };
    std::vector<cplx> grid{cplx(0.2, 0.7)};
    auto swept = dw_point_grid(family, Domain::UpperHalfPlane, grid, cplx(0, 1), 1e-13);
    SelfMap m{[&](cplx w) { return family(grid[0], w); }, Domain::UpperHalfPlane, "pt"};
    auto [w, rep] = dw_point(m, cplx(0, 1), 1e-13);
    CHECK(std::abs(w - swept[0].value) <= 2e-13);
    CHECK(rep.status == SolveStatus::Converged);
}

TEST_CASE("parallel and serial sweeps produce identical values") {
    auto family = [](cplx z, cplx w) { return z + 0.3 * w + 0.05 / (cplx(0, 1.5) - w); };
    std::vector<cplx> grid;
    for (int k = 0; k < 300; ++k) grid.push_back(cplx(-2.0 + 0.012 * k, 0.4));
    auto par = dw_point_grid(family, Domain::UpperHalfPlane, grid, cplx(0, 1), 1e-13, kDwDefaultMaxIter, false);
    auto ser = dw_point_grid(family, Domain::UpperHalfPlane, grid, cplx(0, 1), 1e-13, kDwDefaultMaxIter, true);
    for (size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(par[i].value - ser[i].value) <= 4e-13);
}
