#pragma once

#include <span>
#include <vector>

#include "freeconv/powers.hpp"

namespace freeconv {

// One sample of the T-transform on (-1,0):
//   T(u) = u sigma_{mu,-1/u}(0) / (1 + u),  S = 1/T where T != 0.
// S is undefined (and flagged) on (-1, mass_at_zero - 1] where T vanishes.
struct TSample {
    double u = 0.0;
    cplx T{};
    cplx S{};
    bool s_defined = false;
    ConvergenceReport report{};
};

// Warm-started sweep over a u-grid (ascending order recommended: t = -1/u then
// decreases toward 1 and consecutive sigma solves start near each other).
std::vector<TSample> t_transform(const FMap& mu, std::span<const double> u_grid, double tol = 1e-13);
std::vector<TSample> t_transform(const Measure& mu, std::span<const double> u_grid, double tol = 1e-13);

// Restriction to the S-domain (mass_at_zero - 1, 0); throws if the grid
// touches the zero set of T.
std::vector<TSample> s_transform(const Measure& mu, std::span<const double> u_grid, double tol = 1e-13);

// Residual |psi_mu((u/(1+u)) S(u)) - u| of the inversion identity; real S
// triggers the nontangential eps-schedule from H+.
double inversion_identity_residual(const Measure& mu, const TSample& sample,
                                   const EpsSchedule& schedule = {});

// Two-route multiplicativity check: T of the solver-backed convolution
// against the product of the factor transforms.
struct MultiplicativityReport {
    double max_abs_deviation = 0.0;
    std::vector<double> u;
    std::vector<cplx> t_convolution;
    std::vector<cplx> t_product;
};

MultiplicativityReport verify_multiplicativity(const Measure& mu, const Measure& nu,
                                               std::span<const double> u_grid, double tol = 1e-13);

enum class MeasureClass { PositiveSupport, Symmetric, BooleanMixture, None };

struct ClassifyResult {
    MeasureClass cls = MeasureClass::None;
    double rho = 0.0;  // asymmetry parameter for BooleanMixture (1 and 1/2 for the named classes)
};

// Ray test on sampled T values: T(u) in e^{i(1-rho)pi} [0,+inf) within tol.
// rho = 1 detects positive support, rho = 1/2 symmetry; otherwise the
// asymmetry is estimated from the median argument.
ClassifyResult classify(const Measure& mu, std::span<const double> u_grid, double tol = 1e-6);
ClassifyResult classify_samples(const std::vector<TSample>& samples, double tol = 1e-6);

}  // namespace freeconv
