#include <doctest.h>

#include <cmath>

#include "freeconv/stransform.hpp"

using namespace freeconv;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("T of trivial measures: delta_0, delta_a, MP, Cauchy") {
    auto grid = chebyshev_grid(40);
    auto t0 = t_transform(Measure::point_mass(0.0), grid);
    for (auto& s : t0) CHECK(std::abs(s.T) == doctest::Approx(0.0));

    auto ta = t_transform(Measure::point_mass(1.7), grid);
    for (auto& s : ta) CHECK(rel_err(s.T, cplx(1.7, 0.0)) < 1e-9);

    auto tmp = t_transform(Measure::marchenko_pastur(), grid);
    for (auto& s : tmp) CHECK(rel_err(s.T, cplx(1.0 + s.u, 0.0)) < 1e-9);

    // the Cauchy law has constant T = a + i b
    auto tc = t_transform(Measure::cauchy(0.4, 1.1), grid);
    for (auto& s : tc) CHECK(rel_err(s.T, cplx(0.4, 1.1)) < 1e-9);
}

TEST_CASE("numeric S matches the stable closed forms") {
    auto grid = chebyshev_grid(30, -0.9, -0.1);
    for (auto m : {Measure::boolean_stable(0.6, 0.3), Measure::free_stable(0.7, 0.6),
                   Measure::boolean_stable(0.5, 1.0)}) {
        auto samples = s_transform(m, grid);
        const auto& sp = m.parametric()->stable;
        for (auto& s : samples) {
            REQUIRE(s.s_defined);
            CHECK(std::abs(s.S - stable_s_closed_form(sp, s.u)) < 1e-8);
        }
    }
}

TEST_CASE("semicircle S follows the piecewise formula on both sides of the junction") {
    auto closed = [](double a, double u) -> cplx {
        if (a == 0.0) return cplx(0.0, -1.0) / std::sqrt(-u);
        if (u > -std::min(1.0, a * a / 4.0)) return (-a + std::sqrt(a * a + 4.0 * u)) / (2.0 * u);
        return cplx(-a, std::sqrt(-a * a - 4.0 * u)) / (2.0 * u);
    };
    for (double a : {0.0, 1.0, 1.5}) {
        Measure mu = Measure::semicircle(a, 1.0);
        std::vector<double> grid;
        double junction = -a * a / 4.0;
        for (double u = -0.95; u < -0.02; u += 0.045)
            if (a == 0.0 || std::abs(u - junction) > 5e-3) grid.push_back(u);
        auto samples = t_transform(mu, grid);
        for (auto& s : samples) {
            REQUIRE(s.s_defined);
            CHECK(std::abs(s.S - closed(a, s.u)) < 1e-8);
        }
    }
    // continuity across the junction for a = 1: straddle by 1e-15
    Measure m1 = Measure::semicircle(1.0, 1.0);
    std::vector<double> straddle{-0.25 - 1e-15, -0.25 + 1e-15};
    auto ss = t_transform(m1, straddle);
    REQUIRE(ss[0].s_defined);
    REQUIRE(ss[1].s_defined);
    CHECK(std::abs(ss[0].S - ss[1].S) < 1e-6);
    CHECK(std::abs(ss[0].S - cplx(2.0, 0.0)) < 1e-6);
}

TEST_CASE("zero set of T matches the atom at zero") {
    Measure mu = Measure::atomic({{0.0, 0.3}, {1.0, 0.7}});
    std::vector<double> left{-0.95, -0.85, -0.75};
    std::vector<double> right{-0.5, -0.3, -0.1};
    auto ls = t_transform(mu, left);
    for (auto& s : ls) {
        CHECK(std::abs(s.T) < 1e-6);
        CHECK_FALSE(s.s_defined);
    }
    auto rs = t_transform(mu, right);
    for (auto& s : rs) {
        CHECK(std::abs(s.T) > 1e-3);
        CHECK(s.s_defined);
    }
    CHECK_THROWS_AS(s_transform(mu, left), std::domain_error);
}

TEST_CASE("T values stay in the closed upper half-plane and move continuously") {
    auto grid = chebyshev_grid(200);
    for (auto m : {Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}}), Measure::semicircle(0.5, 1.0)}) {
        auto samples = t_transform(m, grid);
        std::vector<double> slopes;
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            double du = samples[i + 1].u - samples[i].u;
            slopes.push_back(std::abs(samples[i + 1].T - samples[i].T) / du);
        }
        // no isolated jumps: every increment is bounded by ten times the local
        // Lipschitz estimate from the neighbor increments
        for (size_t i = 1; i + 2 < samples.size(); ++i) {
            CHECK(samples[i].T.imag() >= -1e-9);
            double du = samples[i + 1].u - samples[i].u;
            double local = std::max(slopes[i - 1], slopes[i + 1]);
            CHECK(std::abs(samples[i + 1].T - samples[i].T) <= 10.0 * local * du + 1e-6);
        }
    }
}

TEST_CASE("uniqueness surrogate: distinct measures separate, representations agree") {
    auto grid = chebyshev_grid(50, -0.5, -0.02);
    auto ta = t_transform(Measure::semicircle(0.0, 1.0), grid);
    auto tb = t_transform(Measure::atomic({{-1.0, 0.5}, {1.0, 0.5}}), grid);
    double separation = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) separation = std::max(separation, std::abs(ta[i].T - tb[i].T));
    CHECK(separation > 1e-3);

    // same measure, two representations: smooth law vs fine grid discretization
    std::vector<double> xs, fs;
    int nodes = 4000;
    for (int i = 0; i < nodes; ++i) {
        double x = -2.02 + 4.04 * i / (nodes - 1);
        xs.push_back(x);
        fs.push_back(std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * kPi));
    }
    double mass = 0.0;
    for (int i = 0; i + 1 < nodes; ++i) mass += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
    for (auto& f : fs) f /= mass;
    auto tg = t_transform(Measure::grid_density(std::move(xs), std::move(fs)), grid);
    double gap = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(ta[i].T - tg[i].T));
    CHECK(gap < 1e-4);
}

TEST_CASE("weak continuity of T under discretization refinement") {
    auto grid = chebyshev_grid(12, -0.7, -0.1);
    auto reference = t_transform(Measure::semicircle(0.0, 1.0), grid);
    double prev = 1e9;
    for (int n : {16, 64, 256}) {
        std::vector<std::pair<double, double>> atoms;
        for (int k = 0; k < n; ++k) {
            double x = -2.0 + 4.0 * (k + 0.5) / n;
            atoms.emplace_back(x, std::sqrt(std::max(0.0, 4.0 - x * x)));
        }
        double tot = 0.0;
        for (auto& [x, w] : atoms) tot += w;
        for (auto& [x, w] : atoms) w /= tot;
        auto tn = t_transform(Measure::atomic(std::move(atoms)), grid);
        double gap = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(tn[i].T - reference[i].T));
        CHECK(gap < prev + 1e-12);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("inversion identity: psi((u/(1+u)) S(u)) = u") {
    auto grid = chebyshev_grid(15, -0.8, -0.1);
    for (auto m : {Measure::marchenko_pastur(), Measure::semicircle(0.0, 1.0),
                   Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}}), Measure::boolean_stable(0.6, 0.4)}) {
        auto samples = s_transform(m, grid);
        for (auto& s : samples) {
            double residual = inversion_identity_residual(m, s);
            CHECK(residual < 1e-6 + 1e-4);
        }
    }
}

TEST_CASE("multiplicativity: point masses multiply exactly") {
    auto grid = chebyshev_grid(20);
    auto rep = verify_multiplicativity(Measure::point_mass(2.0), Measure::point_mass(3.0), grid);
    CHECK(rep.max_abs_deviation < 1e-8);
    for (auto& t : rep.t_convolution) CHECK(rel_err(t, cplx(6.0, 0.0)) < 1e-8);
}

TEST_CASE("multiplicativity for a two-atom pair") {
    auto grid = chebyshev_grid(25, -0.9, -0.1);
    auto rep = verify_multiplicativity(Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}}),
                                       Measure::atomic({{1.0, 0.5}, {3.0, 0.5}}), grid);
    CHECK(rep.max_abs_deviation < 1e-6);
}

TEST_CASE("classification: positive, symmetric, Boolean mixture, none") {
    auto grid = chebyshev_grid(40, -0.9, -0.1);
    auto c1 = classify(Measure::marchenko_pastur(), grid);
    CHECK(c1.cls == MeasureClass::PositiveSupport);

    auto c2 = classify(Measure::semicircle(0.0, 1.0), grid);
    CHECK(c2.cls == MeasureClass::Symmetric);

    auto c3 = classify(Measure::boolean_stable(0.7, 0.3), grid);
    CHECK(c3.cls == MeasureClass::BooleanMixture);
    CHECK(c3.rho == doctest::Approx(0.3).epsilon(1e-6));

    auto c4 = classify(Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}}), grid);
    CHECK(c4.cls == MeasureClass::None);

    CHECK_THROWS_AS(classify(Measure::point_mass(1.0), grid), std::domain_error);
}
