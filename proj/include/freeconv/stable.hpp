#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "freeconv/complexdomain.hpp"

namespace freeconv {

// Parameters of a free or Boolean stable law, optionally dilated by `scale`.
// The undilated laws are fixed by
//     C_free(z) = eta_boolean(z) = -(e^{-i rho pi} z)^alpha,  z in H+,
// with the principal branch of the power. Dilation by c > 0 composes the
// argument with c*z.
struct StableParams {
    enum class Family { Free, Boolean };
    double alpha = 0.5;
    double rho = 0.5;
    Family family = Family::Free;
    double scale = 1.0;

    bool admissible() const {
        if (!(scale > 0.0)) return false;
        if (alpha > 0.0 && alpha <= 1.0) return rho >= 0.0 && rho <= 1.0;
        if (alpha > 1.0 && alpha <= 2.0)
            return rho >= 1.0 - 1.0 / alpha - 1e-12 && rho <= 1.0 / alpha + 1e-12;
        return false;
    }
    // Subset where the Boolean law is freely infinitely divisible.
    bool in_divisible_set() const {
        if (!(alpha > 0.0 && alpha <= 2.0 / 3.0)) return false;
        double lo = std::max(0.0, 2.0 - 1.0 / alpha);
        double hi = std::min(1.0, 1.0 / alpha - 1.0);
        return rho >= lo && rho <= hi;
    }
};

// eta-transform of the Boolean stable law on C \ [0,+inf) for rho = 1
// (positive support), otherwise on H+ (reflected to C- by conjugation).
cplx boolean_stable_eta(const StableParams& p, cplx z);

// Density of the Boolean stable law at x != 0 (requires 0 < alpha <= 1).
// alpha = 1 edge cases: rho in {0,1} are point masses (density 0 off the atom);
// 0 < rho < 1 is a Cauchy law.
double boolean_stable_density(const StableParams& p, double x);

// Atom carried by the Boolean stable law for alpha = 1, rho in {0,1}
// (position, mass); empty otherwise.
std::optional<std::pair<double, double>> boolean_stable_atom(const StableParams& p);

// Cauchy transform of the free stable law, on C- and its real boundary.
// Large |z| uses the Lagrange series truncated when terms fall below the
// requested floor; otherwise the defining implicit equation is solved by
// damped Newton continued vertically from the series region. Values on H+
// are obtained by reflection.
cplx free_stable_cauchy(const StableParams& p, cplx z);

// Per-thread warm-started variant: keeps the previous solve as a Newton
// starting point when the query moves a short distance inside C-.
class FreeStableCauchy {
  public:
    explicit FreeStableCauchy(const StableParams& p);
    cplx operator()(cplx z) const;

  private:
    StableParams p_;
    mutable bool have_prev_ = false;
    mutable cplx prev_z_{}, prev_g_{};
};

// Density of the free stable law at real x (boundary values from C-).
double free_stable_density(const StableParams& p, double x);

// Total mass of the free stable density on [x0, +inf) resp. (-inf, x0],
// combining adaptive quadrature with the series tail.
double free_stable_mass_above(const StableParams& p, double x0);
double free_stable_mass_below(const StableParams& p, double x0);

// Density of the free Levy measure of the Boolean stable law (parameters in
// the divisible set), assembled from free stable densities per the two-branch
// exponent substitution.
double levy_density(const StableParams& p, double x);

// eta-transform of the measure obtained by classically multiplying an
// independent 1/alpha-th power of nu onto the Boolean stable law:
// eta(z) = eta_nu(-(e^{-i rho pi} z)^alpha). `eta_nu` must accept arguments
// in C \ [0,+inf).
cplx mixture_eta(const StableParams& p, const std::function<cplx(cplx)>& eta_nu, cplx z);

// Closed-form S-transforms on (-1,0) (value for the dilated law).
cplx stable_s_closed_form(const StableParams& p, double u);

// Closed-form T = 1/S.
cplx stable_t_closed_form(const StableParams& p, double u);

// Series radius: the Lagrange series in (e^{i rho pi} z)^{-alpha} converges
// for |z| > radius (undilated law).
double free_stable_series_radius(double alpha);

// Series evaluation alone (throws if it fails to reach the term floor);
// exposed for the series/Newton overlap test.
cplx free_stable_cauchy_series(const StableParams& p, cplx z, double term_floor = 1e-16);

// Implicit-equation residual w*G - 1 + (e^{-i rho pi} G)^alpha (undilated).
cplx free_stable_implicit_residual(double alpha, double rho, cplx w, cplx g);

// Free multiplicative power of a positive stable law (rho must be 1):
// (b_{beta,1})^{boxtimes t} = b_{beta',1} and likewise for the free family,
// with beta' = beta / (beta + t(1-beta)).
StableParams positive_stable_boxtimes_power(const StableParams& p, double t);

}  // namespace freeconv
