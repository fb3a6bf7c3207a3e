#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freeconv/dwsolver.hpp"
#include "freeconv/measures.hpp"

namespace freeconv {

// Result of one subordination solve at a point z in H+ (or its real boundary):
// eta of the multiplicative convolution together with both subordination
// values. omega1 is the Denjoy-Wolff point of w -> z h_nu(z h_mu(w));
// omega2 = z h_mu(omega1) follows algebraically and report2 records the
// residual of its own fixed-point identity.
struct SubordinationResult {
    cplx z{};
    cplx omega1{};
    cplx omega2{};
    cplx eta_conv{};
    ConvergenceReport report1{};
    ConvergenceReport report2{};

    // |z eta - omega1 omega2| <= tol * (1 + |z eta|) and the argument bounds
    // arg z <= arg omega2 <= arg z + pi under the [0,2pi) convention.
    bool identities_hold(double tol = 1e-8) const;
};

// The parametrized analytic self-maps whose Denjoy-Wolff points realize the
// subordination functions: f_z(w) = z h_nu(z h_mu(w)) and
// g_z(w) = h_mu(z h_nu(z w)), both self-maps of H+.
std::pair<SelfMap, SelfMap> build_maps(const EtaMap& mu, const EtaMap& nu, cplx z);

// Stateful solver: keeps the previous Denjoy-Wolff point as a warm start.
// Not thread-safe; give each worker its own instance.
class Subordinator {
  public:
    Subordinator(EtaMap mu, EtaMap nu);
    Subordinator(const Measure& mu, const Measure& nu);

    SubordinationResult solve(cplx z, double tol = 1e-12, int max_iter = kDwDefaultMaxIter);
    void reset_warm_start() { have_warm_ = false; }

    const EtaMap& mu() const { return mu_; }
    const EtaMap& nu() const { return nu_; }

  private:
    EtaMap mu_, nu_;
    cplx warm_{0.0, 1.0};
    bool have_warm_ = false;
};

// One-shot solve (cold start).
SubordinationResult subordinate(const Measure& mu, const Measure& nu, cplx z, double tol = 1e-12);
SubordinationResult subordinate(const EtaMap& mu, const EtaMap& nu, cplx z, double tol = 1e-12);

// eta- and Cauchy-evaluators of mu boxtimes nu backed by the fixed-point
// solver. The returned callables carry a private warm-started Subordinator;
// clone one per thread for parallel sweeps.
EtaMap convolution_eta(const EtaMap& mu, const EtaMap& nu, double tol = 1e-12);
EtaMap convolution_eta(const Measure& mu, const Measure& nu, double tol = 1e-12);
CauchyFn convolution_cauchy(const Measure& mu, const Measure& nu, double tol = 1e-12);
CauchyFn cauchy_from_eta(const EtaMap& eta, double tol_unused = 0.0);

// ---------------------------------------------------------------------------
// Materialized convolution
// ---------------------------------------------------------------------------

struct ConvolutionMeasure {
    std::vector<std::pair<double, double>> atoms;  // off-zero point masses
    double atom_at_zero = 0.0;
    TransformTable density_table;                   // kind = Density over x grid
    std::vector<DensityPoint> density_points;       // same data with flags
    std::string descriptor;

    double density_mass() const;                    // trapezoid over the table
    double total_mass() const;
    Measure to_measure(bool renormalize = true) const;
    // CDF of atoms + interpolated density, for scoring against samples;
    // left_limit excludes the jump at x itself.
    double cdf(double x, bool left_limit = false) const;
};

struct ConvolveOptions {
    double tol = 1e-12;
    EpsSchedule schedule{};
    // Points with |x| below the exclusion are dropped unless include_origin.
    // Negative means 1e-3 times the spread of the input atoms/support.
    double origin_exclusion = -1.0;
    bool include_origin = false;
    bool serial = false;           // reference path: one warm-started chunk
    std::size_t chunk = 64;
};

ConvolutionMeasure convolve(const Measure& mu, const Measure& nu, std::span<const double> x_grid,
                            const ConvolveOptions& options = {});

// Support endpoints of the absolutely continuous part: each edge of every
// maximal positive-density run on the grid, refined by bisection of the
// density indicator down to `resolution`.
std::vector<double> detect_support_edges(const CauchyFn& g, std::span<const double> x_grid,
                                         double resolution = 1e-4, double threshold = 1e-3,
                                         const EpsSchedule& schedule = {});

// Base grid plus geometric clusters of points around the given marks (support
// edges / density spikes), so trapezoid masses capture inverse-square-root
// peaks. Sorted, deduplicated, clipped to [base.front(), base.back()].
std::vector<double> refine_grid_near(std::span<const double> base, std::span<const double> marks,
                                     int levels = 18);

// Two-pass materialization: detect the support edges on a uniform base grid,
// then resolve the edge spikes with geometric refinement so the trapezoid CDF
// carries the full mass. The detected edges come back through `edges_out`.
ConvolutionMeasure convolve_refined(const Measure& mu, const Measure& nu, double xmin, double xmax,
                                    int base_n, const ConvolveOptions& options = {},
                                    std::vector<double>* edges_out = nullptr);

// ---------------------------------------------------------------------------
// The subordination homomorphism family
// ---------------------------------------------------------------------------

// eta-transform of B_nu(mu): z -> omega2(z). B_nu(delta_a) = delta_a.
EtaMap b_eta(const EtaMap& nu, const EtaMap& mu, double tol = 1e-12);
EtaMap b_eta(const Measure& nu, const Measure& mu, double tol = 1e-12);

// Materialized B_nu(mu) by Stieltjes inversion on the given grid (density
// renormalized onto the grid; atoms are not scanned).
Measure b_map(const Measure& nu, const Measure& mu, std::span<const double> x_grid,
              const ConvolveOptions& options = {});

}  // namespace freeconv
