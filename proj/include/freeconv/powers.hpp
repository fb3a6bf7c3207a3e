#pragma once

#include <functional>
#include <optional>
#include <span>

#include "freeconv/dwsolver.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

// F-transform as a callable on C- and its real boundary.
struct FMap {
    std::function<cplx(cplx)> F;
    double mass_at_zero = 0.0;
    std::string descriptor;
};

FMap f_map(const Measure& mu);
FMap f_map_from_eta(const EtaMap& em, double mass_at_zero = 0.0);
FMap f_map_from_cauchy(CauchyFn g, double mass_at_zero = 0.0, std::string descriptor = {});

// Declared power family per the module contract.
struct PowerEvaluator {
    enum class Kind { FreeAdditive, Boolean, FreeMultiplicative };
    Measure base;
    Kind kind = Kind::FreeAdditive;
    double t = 1.0;
    void require_valid() const;
};

// sigma_{mu,t}(z): Denjoy-Wolff point of w -> z + (t-1)(F(w) - w) on C-.
// sigma_{mu,1} = id; the point mass at zero gives sigma = z exactly.
std::pair<cplx, ConvergenceReport> sigma_point(const FMap& mu, double t, cplx z, double tol = 1e-13,
                                               cplx warm_start = cplx(0.0, -1.0),
                                               int max_iter = kDwDefaultMaxIter);
cplx sigma(const Measure& mu, double t, cplx z, double tol = 1e-13);

// F of the free additive power from the sigma identity
// F_{mu^{boxplus t}}(z) = (t sigma - z)/(t - 1) = F_mu(sigma); t > 1.
cplx free_additive_power_F(const FMap& mu, double t, cplx z, double tol = 1e-13);
cplx free_additive_power_F(const Measure& mu, double t, cplx z, double tol = 1e-13);

// eta-transform of mu^{boxplus t} (t >= 1); positive_support is inherited.
EtaMap free_additive_power_eta(const Measure& mu, double t, double tol = 1e-13);
EtaMap free_additive_power_eta(const FMap& fm, double t, bool positive_support, double tol = 1e-13);

// Boolean power: eta scales linearly. Closed forms for point masses and
// Boolean stable laws; atomic bases get an exact atom/density split; other
// bases materialize the density on the supplied grid.
EtaMap boolean_power_eta(const EtaMap& em, double t);
Measure boolean_power(const Measure& mu, double t, std::span<const double> x_grid = {},
                      const EpsSchedule& schedule = {});

// Free multiplicative power of a declared positive parametric law.
// Stable laws reparametrize in closed form; the Marchenko-Pastur power is an
// S-transform object (measure not materialized).
struct MultiplicativePower {
    std::optional<Measure> measure;             // set for stable laws / point masses
    std::function<cplx(double)> s_transform;    // closed-form S on (-1,0)
    EtaMap eta;                                  // always usable in subordination
};

MultiplicativePower multiplicative_power_positive(const Measure& nu, double t);

// eta of MP^{boxtimes t} (t >= 1) by inverting u (1+u)^{-(1+t)} = z along a
// ray from the origin.
EtaMap mp_boxtimes_power_eta(double t);

}  // namespace freeconv
