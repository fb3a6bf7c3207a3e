#pragma once

#include <array>
#include <utility>

#include "freeconv/measures.hpp"

namespace freeconv {

// Two two-atom measures in the normal form
//   mu = lambda_mu d_1 + (1-lambda_mu) d_{alpha_mu},
//   nu = lambda_nu d_1 + (1-lambda_nu) d_{alpha_nu},
// with the first atom pinned at 1 and alpha_nu >= 0.
struct TwoPointPair {
    double lambda_mu = 0.5;
    double lambda_nu = 0.5;
    double alpha_mu = 0.0;
    double alpha_nu = 0.0;

    void require_valid() const;
    Measure mu() const;
    Measure nu() const;
};

// H(z) = (z + b) / (c z + d), the Moebius form of M(z)/z for a two-atom
// measure with one atom at 1.
struct MoebiusH {
    double b = 0.0, c = 0.0, d = 0.0;
    cplx operator()(cplx z) const { return (z + b) / (c * z + d); }
};

MoebiusH moebius_h(double lambda, double alpha);

// Quartic coefficients (ascending) of the discriminant polynomial P(z) in the
// reciprocal-coordinate quadratic for Omega1; the two forms swap the roles of
// the factors and must agree coefficientwise.
std::array<double, 5> discriminant_coeffs_first(const TwoPointPair& p);
std::array<double, 5> discriminant_coeffs_second(const TwoPointPair& p);

// Closed-form subordination in reciprocal coordinates (capital Omega):
// Omega1 solves a quadratic whose root branch is tracked by continuation from
// a purely imaginary reference point; Omega2 = z H_mu(Omega1) and
// M = Omega1 H_mu(Omega1) follow rationally, G = M / (z (M - 1)).
class TwoPointClosedForm {
  public:
    explicit TwoPointClosedForm(const TwoPointPair& pair);

    cplx omega1(cplx z) const;
    std::pair<cplx, cplx> subordination(cplx z) const;  // (Omega1, Omega2)
    cplx m_transform(cplx z) const;
    cplx cauchy(cplx z) const;
    double density(double x, double eps = 1e-9) const;  // -(1/pi) Im G(x + i eps)

    const TwoPointPair& pair() const { return pair_; }
    cplx reference_point() const { return zref_; }

    // Real roots of the discriminant (branch points = endpoints of the
    // absolutely continuous support), sorted; only real roots are returned.
    std::vector<double> real_branch_points() const;

  private:
    // quadratic A(z) w^2 + B(z) w + C(z) = 0 for Omega1
    void quad_coeffs(cplx z, cplx& A, cplx& B, cplx& C) const;
    std::pair<cplx, cplx> roots_at(cplx z) const;
    cplx continue_root(cplx z_from, cplx w_from, cplx z_to, int depth) const;

    TwoPointPair pair_;
    MoebiusH hm_, hn_;
    cplx zref_;
    cplx omega1_ref_;
};

// Reduce a general pair of two-atom measures (mu arbitrary, nu positive,
// each with an atom off zero) to normal form: returns the normalized pair and
// the dilation s with mu boxtimes nu = D_s(normal-form convolution).
std::pair<TwoPointPair, double> normalize_two_point(const Measure& mu, const Measure& nu);

}  // namespace freeconv
