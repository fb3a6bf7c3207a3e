#include <doctest.h>

#include <cmath>

#include "freeconv/measures.hpp"
#include "freeconv/stable.hpp"

using namespace freeconv;

namespace {

StableParams fs(double a, double r, double c = 1.0) { return {a, r, StableParams::Family::Free, c}; }
StableParams bs(double a, double r, double c = 1.0) { return {a, r, StableParams::Family::Boolean, c}; }

double rel_err(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("admissible parameter set") {
    CHECK(fs(0.5, 0.9).admissible());
    CHECK(fs(2.0, 0.5).admissible());
    CHECK_FALSE(fs(2.0, 0.4).admissible());
    CHECK(fs(1.5, 1.0 / 3.0).admissible());
    CHECK_FALSE(fs(1.5, 0.2).admissible());
    CHECK_FALSE(fs(2.5, 0.5).admissible());
    CHECK(bs(0.5, 0.5).in_divisible_set());
    CHECK_FALSE(bs(0.7, 0.5).in_divisible_set());
    CHECK_FALSE(bs(0.6, 0.1).in_divisible_set());
}

TEST_CASE("series head: the n=1 term carries coefficient 1") {
    // G(z) ~ 1/z - (e^{i rho pi} z)^{-alpha} / z for large z
    StableParams p = fs(0.6, 0.3);
    cplx z(1e6, -3.0);
    cplx g = free_stable_cauchy_series(p, z);
    cplx head = 1.0 / z - principal_pow(std::polar(1.0, p.rho * kPi) * z, -p.alpha) / z;
    CHECK(std::abs(g - head) < 1e-3 * std::abs(head - 1.0 / z));
}

TEST_CASE("alpha = 2 is the standard semicircle law") {
    StableParams p = fs(2.0, 0.5);
    cplx g = free_stable_cauchy(p, cplx(0.0, -2.0));
    CHECK(rel_err(g, cplx(0.0, std::sqrt(2.0) - 1.0)) < 1e-12);
    CHECK(free_stable_density(p, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-10));
    CHECK(free_stable_density(p, 2.5) == doctest::Approx(0.0));
}

TEST_CASE("alpha = 1 free and Boolean laws coincide with a Cauchy law") {
    // center -cos(rho pi), scale sin(rho pi)
    double rho = 0.3;
    StableParams p = fs(1.0, rho);
    double a = -std::cos(rho * kPi), b = std::sin(rho * kPi);
    cplx w(0.7, -1.1);
    CHECK(rel_err(free_stable_cauchy(p, w), 1.0 / (w - a - cplx(0, 1) * b)) < 1e-13);
    // Boolean density at a few points
    for (double x : {-1.0, 0.4, 2.0}) {
        double want = b / (kPi * ((x - a) * (x - a) + b * b));
        CHECK(boolean_stable_density(bs(1.0, rho), x) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("series and Newton continuation agree on an overlap annulus") {
    for (auto p : {fs(0.5, 0.7), fs(0.8, 0.5), fs(1.5, 0.4)}) {
        double radius = free_stable_series_radius(p.alpha);
        for (double mult : {2.3, 3.0, 4.0}) {
            for (double angle : {-0.3, -1.2, -2.6}) {
                cplx z = std::polar(mult * radius, angle);
                cplx a = free_stable_cauchy_series(p, z);
                // force the continuation path irrespective of |z|
                StableParams q = p;
                cplx b = free_stable_cauchy(q, z - cplx(0, 1e-14));
                CHECK(rel_err(a, b) < 1e-10);
            }
        }
    }
}

TEST_CASE("implicit equation holds at solved points") {
    StableParams p = fs(0.7, 0.6);
    for (cplx z : {cplx(0.5, -0.4), cplx(-1.2, -0.1), cplx(0.05, -2.0)}) {
        cplx g = free_stable_cauchy(p, z);
        CHECK(std::abs(free_stable_implicit_residual(p.alpha, p.rho, z, g)) < 1e-11);
    }
}

TEST_CASE("Boolean stable density closed form") {
    CHECK(boolean_stable_density(bs(0.5, 1.0), 1.0) == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(boolean_stable_density(bs(0.5, 0.0), 1.0) == doctest::Approx(0.0));
    CHECK(boolean_stable_density(bs(0.5, 0.0), -1.0) == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK_THROWS_AS(boolean_stable_density(bs(1.5, 0.5), 1.0), std::domain_error);
    // alpha=1 point masses carry an atom, zero density
    CHECK(boolean_stable_density(bs(1.0, 1.0), 0.3) == doctest::Approx(0.0));
    auto atom = boolean_stable_atom(bs(1.0, 1.0));
    REQUIRE(atom.has_value());
    CHECK(atom->first == doctest::Approx(1.0));
    CHECK(atom->second == doctest::Approx(1.0));
}

TEST_CASE("Boolean mass split: the positive side carries rho") {
    for (auto [alpha, rho] : {std::pair{0.5, 0.7}, {0.8, 0.3}, {0.6, 1.0}}) {
        // integral of q_{alpha,rho} over (0,inf) via the arctan closed form
        double arp = alpha * rho * kPi;
        double positive_mass;
        if (std::sin(arp) == 0.0) positive_mass = (rho == 1.0 && alpha == 1.0) ? 1.0 : rho;
        else positive_mass = (kPi / 2 - std::atan(std::cos(arp) / std::sin(arp))) / (alpha * kPi);
        CHECK(positive_mass == doctest::Approx(rho).epsilon(1e-12));
        // numeric quadrature of the density agrees (log substitution x = e^u
        // tames the x^{alpha-1} edge and the heavy tail)
        auto q = bs(alpha, rho);
        double acc = 0.0;
        int n = 20000;
        double ulo = -60.0, uhi = 60.0;
        auto f = [&](double u) {
            double x = std::exp(u);
            return boolean_stable_density(q, x) * x;
        };
        double h = (uhi - ulo) / n;
        acc = 0.5 * (f(ulo) + f(uhi));
        for (int i = 1; i < n; ++i) acc += f(ulo + i * h);
        acc *= h;
        CHECK(acc == doctest::Approx(rho).epsilon(2e-3));
    }
}

TEST_CASE("free stable density: total mass and positive-side mass") {
    StableParams p = fs(0.7, 0.6);
    double above = free_stable_mass_above(p, 0.0);
    double below = free_stable_mass_below(p, 0.0);
    CHECK(above + below == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(above == doctest::Approx(0.6).epsilon(2e-3));  // mass on [0,inf) equals rho

    StableParams sym = fs(1.2, 0.5);
    CHECK(free_stable_mass_above(sym, 0.0) == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("reflection symmetry: (alpha, rho) mirrors (alpha, 1-rho)") {
    StableParams p = fs(0.8, 0.7), q = fs(0.8, 0.3);
    for (double x : {0.4, 1.3, 3.0}) {
        CHECK(free_stable_density(p, x) == doctest::Approx(free_stable_density(q, -x)).epsilon(1e-9));
    }
    StableParams pb = bs(0.6, 0.8), qb = bs(0.6, 0.2);
    for (double x : {0.5, 2.0}) {
        CHECK(boolean_stable_density(pb, x) == doctest::Approx(boolean_stable_density(qb, -x)).epsilon(1e-12));
    }
}

TEST_CASE("free Levy density of the Boolean law") {
    // alpha = 1/2 makes the exponent substitution the identity: the density
    // is the free stable density with (1-alpha, alpha rho/(1-alpha))
    StableParams p = bs(0.5, 0.5);
    REQUIRE(p.in_divisible_set());
    StableParams expect = fs(0.5, 0.5);
    for (double x : {0.3, 1.0, 2.5}) {
        CHECK(levy_density(p, x) == doctest::Approx(free_stable_density(expect, x)).epsilon(1e-10));
        CHECK(levy_density(p, -x) == doctest::Approx(levy_density(p, x)).epsilon(1e-9));  // symmetric
    }
    // negative branch index sigma = (alpha rho + 1 - 2 alpha)/(1-alpha) stays in [0,1]
    StableParams p2 = bs(0.6, 0.5);
    REQUIRE(p2.in_divisible_set());
    double sigma = (p2.alpha * p2.rho + 1.0 - 2.0 * p2.alpha) / (1.0 - p2.alpha);
    CHECK(sigma >= 0.0);
    CHECK(sigma <= 1.0);
    CHECK(levy_density(p2, -0.7) >= 0.0);
    CHECK_THROWS_AS(levy_density(bs(0.9, 0.5), 1.0), std::domain_error);

    // the Levy measure integrates to one
    StableParams p3 = bs(0.5, 0.5);
    double mass = 0.0;
    int n = 3000;
    for (int i = 0; i < n; ++i) {
        double t0 = -12.0 + 24.0 * i / n, t1 = -12.0 + 24.0 * (i + 1) / n;
        auto f = [&](double t) {
            if (std::abs(t) < 1e-9) return 0.0;
            return levy_density(p3, t);
        };
        mass += 0.5 * (f(t0) + f(t1)) * (t1 - t0);
    }
    StableParams tail = fs(0.5, 0.5);
    mass += free_stable_mass_above(tail, 12.0) + free_stable_mass_below(tail, -12.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("mixture eta composes eta_nu with the Boolean stable eta") {
    StableParams p = bs(0.7, 0.4);
    auto eta_delta1 = [](cplx z) { return z; };  // point mass at 1
    for (cplx z : {cplx(0.3, 0.9), cplx(-1.0, 0.4)}) {
        CHECK(rel_err(mixture_eta(p, eta_delta1, z), boolean_stable_eta(p, z)) < 1e-14);
    }
    CHECK_THROWS_AS(mixture_eta(fs(0.7, 0.4), eta_delta1, cplx(0, 1)), std::domain_error);
}

TEST_CASE("closed-form S-transforms satisfy the reproducing identities to 1e-10") {
    for (auto [alpha, rho, beta] : {std::tuple{0.5, 0.3, 0.5}, {0.7, 1.0, 0.4}, {0.9, 0.5, 0.8}}) {
        double bprime = alpha * beta / (1.0 - beta + alpha * beta);
        for (double u = -0.9; u < -0.05; u += 0.05) {
            cplx lhs_b = stable_s_closed_form(bs(alpha, rho), u) * stable_s_closed_form(bs(bprime, 1.0), u);
            cplx rhs_b = stable_s_closed_form(bs(alpha * beta, rho), u);
            CHECK(std::abs(lhs_b - rhs_b) < 1e-10);
            cplx lhs_f = stable_s_closed_form(fs(alpha, rho), u) * stable_s_closed_form(fs(bprime, 1.0), u);
            cplx rhs_f = stable_s_closed_form(fs(alpha * beta, rho), u);
            CHECK(std::abs(lhs_f - rhs_f) < 1e-10);
        }
    }
}

TEST_CASE("positive stable multiplicative powers reparametrize") {
    StableParams p = bs(0.5, 1.0);
    StableParams q = positive_stable_boxtimes_power(p, 1.0 / 0.7);  // beta' = alpha beta / (1-beta+alpha beta)
    double alpha = 0.7, beta = 0.5;
    CHECK(q.alpha == doctest::Approx(alpha * beta / (1.0 - beta + alpha * beta)));
    CHECK(q.rho == doctest::Approx(1.0));
    CHECK_THROWS_AS(positive_stable_boxtimes_power(bs(0.5, 0.4), 2.0), std::domain_error);
    // identity power
    StableParams id = positive_stable_boxtimes_power(p, 1.0);
    CHECK(id.alpha == doctest::Approx(p.alpha));
}

TEST_CASE("prop: Boolean = free boxtimes MP-power through S-transforms") {
    for (auto [alpha, rho] : {std::pair{0.5, 0.7}, {0.8, 0.2}, {1.0, 0.5}}) {
        double t = (1.0 - alpha) / alpha;
        for (double u = -0.85; u < -0.1; u += 0.07) {
            cplx lhs = stable_s_closed_form(bs(alpha, rho), u);
            cplx rhs = stable_s_closed_form(fs(alpha, rho), u) *
                       principal_pow(cplx(1.0 + u, 0.0), -t);  // S_MP(u)^t
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}
