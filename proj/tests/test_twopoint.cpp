#include <doctest.h>

#include <cmath>
#include <random>

#include "freeconv/subordination.hpp"
#include "freeconv/twopoint.hpp"

using namespace freeconv;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

// example 1: mu = (d_1 + d_{-3})/2, nu = (d_1 + d_3)/2
const TwoPointPair kEx1{0.5, 0.5, -3.0, 3.0};
// example 2: mu = d_1/3 + 2 d_{-2}/3, nu = (d_1 + d_0)/2
const TwoPointPair kEx2{1.0 / 3.0, 0.5, -2.0, 0.0};

// reciprocal-coordinate adapters between the numeric lower-case omegas and
// the closed-form capital Omegas
cplx cap_from_low(cplx low_at_recip_conj) { return std::conj(1.0 / low_at_recip_conj); }

}  // namespace

TEST_CASE("Moebius H forms match the direct eta computation") {
    // H(z) = 1/h(1/z); h from the rational eta of the two-atom measure
    MoebiusH hm = moebius_h(0.5, -3.0);
    CHECK(hm.b == doctest::Approx(1.0));
    CHECK(hm.c == doctest::Approx(-1.0));
    CHECK(hm.d == doctest::Approx(3.0));
    MoebiusH hn = moebius_h(0.5, 3.0);
    CHECK(hn.b == doctest::Approx(-2.0));
    CHECK(hn.c == doctest::Approx(2.0));
    CHECK(hn.d == doctest::Approx(-3.0));
    // spot check against eta/h of the measure: H(z) h(1/z) = 1
    Measure mu = kEx1.mu();
    EtaMap em = eta_map(mu);
    for (cplx z : {cplx(0.4, 1.2), cplx(-2.0, 0.3)}) {
        cplx h = em(1.0 / z) * z;  // h(1/z) = eta(1/z)/(1/z)
        CHECK(rel_err(hm(z), 1.0 / h) < 1e-13);
    }
}

TEST_CASE("the two discriminant factorizations agree coefficientwise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(0.05, 0.95), am(-4.0, 4.0), an(0.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        TwoPointPair p{lam(rng), lam(rng), am(rng), an(rng)};
        auto c1 = discriminant_coeffs_first(p);
        auto c2 = discriminant_coeffs_second(p);
        for (int k = 0; k < 5; ++k) CHECK(c1[k] == doctest::Approx(c2[k]).epsilon(1e-12));
    }
}

TEST_CASE("example 1 closed form at z = 1+i") {
    TwoPointClosedForm cf(kEx1);
    cplx z(1.0, 1.0);
    // Omega1 = (z^2 + 9 + sqrt(P)) / (4z + 6) with P = (z-1)(z-3)(z+3)(z+9),
    // branch fixed by continuity from the imaginary reference point
    cplx P = (z - 1.0) * (z - 3.0) * (z + 3.0) * (z + 9.0);
    cplx o1 = cf.omega1(z);
    cplx q1 = ((z * z + 9.0) + std::sqrt(P)) / (4.0 * z + 6.0);
    cplx q2 = ((z * z + 9.0) - std::sqrt(P)) / (4.0 * z + 6.0);
    CHECK((rel_err(o1, q1) < 1e-12 || rel_err(o1, q2) < 1e-12));
    CHECK(o1.imag() > 0.0);
    // Omega2 from the paper display, same branch
    auto [O1, O2] = cf.subordination(z);
    cplx q2a = ((z * z + 9.0) + std::sqrt(P)) / (12.0 - 2.0 * z);
    cplx q2b = ((z * z + 9.0) - std::sqrt(P)) / (12.0 - 2.0 * z);
    CHECK((rel_err(O2, q2a) < 1e-12 || rel_err(O2, q2b) < 1e-12));
}

TEST_CASE("example 2 closed form: Omega1 = (2z+1+sqrt(4z^2+4z-7))/2") {
    TwoPointClosedForm cf(kEx2);
    for (cplx z : {cplx(0.5, 0.8), cplx(-1.0, 0.4), cplx(2.0, 2.0)}) {
        cplx r = std::sqrt(4.0 * z * z + 4.0 * z - 7.0);
        cplx o1 = cf.omega1(z);
        cplx a = (2.0 * z + 1.0 + r) / 2.0;
        cplx b = (2.0 * z + 1.0 - r) / 2.0;
        CHECK((rel_err(o1, a) < 1e-11 || rel_err(o1, b) < 1e-11));
        // Omega2/z = (2z-1+sqrt(...))/(2(2-2z))
        auto [O1, O2] = cf.subordination(z);
        cplx wa = (2.0 * z - 1.0 + r) / (2.0 * (2.0 - 2.0 * z));
        cplx wb = (2.0 * z - 1.0 - r) / (2.0 * (2.0 - 2.0 * z));
        CHECK((rel_err(O2 / z, wa) < 1e-11 || rel_err(O2 / z, wb) < 1e-11));
    }
}

TEST_CASE("degenerate alpha_mu = 1 collapses to the single-atom identity") {
    TwoPointPair p{0.5, 0.5, 1.0, 3.0};  // mu = delta_1
    TwoPointClosedForm cf(p);
    Measure nu = p.nu();
    CauchyFn gn = cauchy_evaluator(nu);
    for (cplx z : {cplx(0.7, 1.0), cplx(-0.5, 2.0)}) {
        CHECK(rel_err(cf.cauchy(z), gn(z)) < 1e-10);
    }
}

TEST_CASE("oracle agreement: numeric subordination matches closed forms") {
    for (const auto& pair : {kEx1, kEx2}) {
        TwoPointClosedForm cf(pair);
        Subordinator sub(pair.mu(), pair.nu());
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> re(-6.0, 6.0), im(0.02, 5.0);
        for (int i = 0; i < 200; ++i) {
            cplx z(re(rng), im(rng));
            cplx w = 1.0 / std::conj(z);  // numeric side evaluates at 1/conj(z)
            auto r = sub.solve(w, 1e-13);
            REQUIRE(r.report1.status == SolveStatus::Converged);
            cplx O1 = cap_from_low(r.omega1);
            cplx O2 = cap_from_low(r.omega2);
            cplx G = std::conj(w / (1.0 - r.eta_conv));
            auto [C1, C2] = cf.subordination(z);
            CHECK(std::abs(O1 - C1) < 1e-8 * (1.0 + std::abs(C1)));
            CHECK(std::abs(O2 - C2) < 1e-8 * (1.0 + std::abs(C2)));
            CHECK(std::abs(G - cf.cauchy(z)) < 1e-8);
        }
    }
}

TEST_CASE("example 1 branch points sit at -9, -3, 1, 3") {
    TwoPointClosedForm cf(kEx1);
    auto roots = cf.real_branch_points();
    REQUIRE(roots.size() == 4);
    CHECK(roots[0] == doctest::Approx(-9.0).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(roots[3] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("example 2 carries atoms at 0 and -2 visible in the closed form") {
    TwoPointClosedForm cf(kEx2);
    // atom mass = lim (i eps) G(a + i eps)
    for (auto [a, m] : {std::pair{0.0, 0.5}, {-2.0, 1.0 / 6.0}}) {
        cplx est = cplx(0.0, 1e-9) * cf.cauchy(cplx(a, 1e-9));
        CHECK(est.real() == doctest::Approx(m).epsilon(1e-5));
    }
}

TEST_CASE("normalization adapter reduces general pairs by dilation") {
    Measure mu = Measure::atomic({{-1.5, 0.5}, {0.5, 0.5}});
    Measure nu = Measure::atomic({{0.5, 0.5}, {1.5, 0.5}});
    auto [pair, s] = normalize_two_point(mu, nu);
    TwoPointClosedForm cf(pair);
    // G_{mu boxtimes nu}(z) = G_{normal}(z/s)/s
    Subordinator sub(mu, nu);
    for (cplx z : {cplx(0.8, 0.9), cplx(-2.0, 1.4)}) {
        cplx w = 1.0 / std::conj(z);
        auto r = sub.solve(w, 1e-13);
        cplx g_direct = std::conj(w / (1.0 - r.eta_conv));
        CHECK(std::abs(g_direct - cf.cauchy(z / s) / s) < 1e-9);
    }
}

TEST_CASE("invalid pairs are rejected") {
    CHECK_THROWS_AS(TwoPointClosedForm({0.0, 0.5, -1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TwoPointClosedForm({0.5, 0.5, -1.0, -1.0}), std::invalid_argument);
}
