#include <doctest.h>

#include <cmath>

#include "freeconv/rmt.hpp"

using namespace freeconv;

TEST_CASE("counter rng is a pure function of (seed, index)") {
    CounterRng a(42), b(42), c(43);
    CHECK(a.uniform01(7) == b.uniform01(7));
    CHECK(a.uniform01(7) != c.uniform01(7));
    CHECK(a.uniform01(7) != a.uniform01(8));
    for (std::uint64_t i = 0; i < 100; ++i) {
        double u = a.uniform01(i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    auto [g1, g2] = a.gauss_pair(3);
    CHECK(std::isfinite(g1));
    CHECK(std::isfinite(g2));
}

TEST_CASE("haar unitary: U(1) is a phase, columns are unit, draw is deterministic") {
    CMatrix u1 = haar_unitary(1, 5);
    CHECK(std::abs(std::abs(u1.at(0, 0)) - 1.0) < 1e-14);

    CMatrix u = haar_unitary(64, 12345);
    for (int j = 0; j < 64; ++j) {
        double norm = 0.0;
        for (int i = 0; i < 64; ++i) norm += std::norm(u.at(i, j));
        CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-13);
    }
    CHECK(unitarity_defect(u) < 1e-12);

    CMatrix v = haar_unitary(64, 12345);
    bool identical = true;
    for (size_t k = 0; k < u.a.size(); ++k)
        if (u.a[k] != v.a[k]) identical = false;
    CHECK(identical);
}

TEST_CASE("jacobi eigenvalues: closed-form 2x2 and a conjugated diagonal") {
    CMatrix m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    m.at(0, 1) = cplx(0.5, 0.25);
    m.at(1, 0) = std::conj(m.at(0, 1));
    auto ev = hermitian_eigenvalues(m);
    double disc = std::sqrt(1.0 + std::norm(cplx(0.5, 0.25)));
    CHECK(ev[0] == doctest::Approx(-disc).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(disc).epsilon(1e-12));

    // Q D Q* must return D for a Haar Q
    int n = 24;
    CMatrix q = haar_unitary(n, 77);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = std::sin(3.0 * i) * 2.0;
    CMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += q.at(i, k) * d[k] * std::conj(q.at(j, k));
            a.at(i, j) = s;
        }
    auto got = hermitian_eigenvalues(std::move(a));
    std::sort(d.begin(), d.end());
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(d[i]).epsilon(1e-10));
}

TEST_CASE("largest remainder apportionment") {
    auto c = atom_counts({{1.0, 0.5}, {2.0, 0.5}}, 7);
    CHECK(c[0] + c[1] == 7);
    auto c2 = atom_counts({{1.0, 1.0 / 3.0}, {2.0, 2.0 / 3.0}}, 9);
    CHECK(c2[0] == 3);
    CHECK(c2[1] == 6);
}

TEST_CASE("scalar conjugation model: all eigenvalues equal the product") {
    auto s = sample_spectrum(Measure::point_mass(2.0), Measure::point_mass(3.0), 16, 9);
    for (double ev : s.eigenvalues) CHECK(ev == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("trace property: mean eigenvalue matches tr(A)/n tr(B^2)/n") {
    Measure mu = Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}});
    Measure nu = Measure::atomic({{1.0, 0.5}, {3.0, 0.5}});
    int n = 128;
    double want = (-3.0 * 0.5 + 1.0 * 0.5) * (1.0 * 0.5 + 3.0 * 0.5);  // -2
    double acc = 0.0;
    int seeds = 8;
    for (int s = 0; s < seeds; ++s) {
        auto sample = sample_spectrum(mu, nu, n, 100 + s);
        double mean = 0.0;
        for (double ev : sample.eigenvalues) mean += ev;
        acc += mean / n;
    }
    acc /= seeds;
    CHECK(std::abs(acc - want) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("sample determinism and the representation warning") {
    auto a = sample_spectrum(Measure::atomic({{1.0, 0.5}, {2.0, 0.5}}),
                             Measure::point_mass(1.0), 32, 4);
    auto b = sample_spectrum(Measure::atomic({{1.0, 0.5}, {2.0, 0.5}}),
                             Measure::point_mass(1.0), 32, 4);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (size_t i = 0; i < a.eigenvalues.size(); ++i) CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK_FALSE(a.representation_warning);
    auto c = sample_spectrum(Measure::atomic({{1.0, 1.0 / 3.0}, {2.0, 2.0 / 3.0}}),
                             Measure::point_mass(1.0), 4, 4);
    CHECK(c.representation_warning);
}

TEST_CASE("ks distance: degenerate agreement and the mass gate") {
    auto s = sample_spectrum(Measure::point_mass(2.0), Measure::point_mass(3.0), 50, 11);
    ConvolutionMeasure predicted;
    predicted.atoms = {{6.0, 1.0}};
    CHECK(ks_distance(s, predicted) <= 1.0 / 50 + 1e-12);
    ConvolutionMeasure bad;
    bad.atoms = {{6.0, 0.7}};
    CHECK_THROWS_AS(ks_distance(s, bad), std::invalid_argument);
}

TEST_CASE("mismatched prediction scores far from zero") {
    Measure mu = Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}});
    Measure nu = Measure::point_mass(2.0);
    auto s = sample_spectrum(mu, nu, 64, 21);
    ConvolutionMeasure predicted;  // wrong: pretend everything sits at +2 and +6
    predicted.atoms = {{2.0, 0.5}, {6.0, 0.5}};
    CHECK(ks_distance(s, predicted) > 0.1);
}
