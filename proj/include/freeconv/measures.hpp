#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "freeconv/complexdomain.hpp"
#include "freeconv/stable.hpp"

namespace freeconv {

// ---------------------------------------------------------------------------
// Measure representations
// ---------------------------------------------------------------------------

struct AtomicMeasure {
    std::vector<std::pair<double, double>> atoms;  // (position, mass), mass in (0,1]
};

// Density sampled on a strictly increasing grid, interpreted as the
// piecewise-linear interpolant, plus optional point masses. `atoms` extends
// the plain (grid, density, atom_at_zero) data so materialized convolutions
// and Boolean powers fit in the same type.
struct GridDensityMeasure {
    std::vector<double> grid;
    std::vector<double> density;
    double atom_at_zero = 0.0;
    std::vector<std::pair<double, double>> atoms;  // off-zero point masses
};

enum class Law { FreeStable, BooleanStable, Semicircle, MarchenkoPastur, CauchyDist, PointMass };

struct ParametricLaw {
    Law law = Law::PointMass;
    double a = 0.0, b = 0.0;       // Semicircle(mean a, variance b), Cauchy(a,b), PointMass(a)
    StableParams stable{};          // FreeStable / BooleanStable
};

class Measure {
  public:
    using Repr = std::variant<AtomicMeasure, GridDensityMeasure, ParametricLaw>;

    Measure() : repr_(ParametricLaw{Law::PointMass, 0.0, 0.0, {}}) {}
    explicit Measure(Repr r) : repr_(std::move(r)) { validate(); }

    static Measure atomic(std::vector<std::pair<double, double>> atoms);
    static Measure grid_density(std::vector<double> grid, std::vector<double> density,
                                double atom_at_zero = 0.0,
                                std::vector<std::pair<double, double>> atoms = {});
    static Measure point_mass(double a);
    static Measure semicircle(double mean, double variance);
    static Measure marchenko_pastur();
    static Measure cauchy(double a, double b);
    static Measure free_stable(double alpha, double rho, double scale = 1.0);
    static Measure boolean_stable(double alpha, double rho, double scale = 1.0);

    const Repr& repr() const { return repr_; }
    bool is_atomic() const { return std::holds_alternative<AtomicMeasure>(repr_); }
    bool is_grid() const { return std::holds_alternative<GridDensityMeasure>(repr_); }
    bool is_parametric() const { return std::holds_alternative<ParametricLaw>(repr_); }
    const ParametricLaw* parametric() const { return std::get_if<ParametricLaw>(&repr_); }

    // Checks normalization (total mass 1 within 1e-12), atom distinctness and
    // admissibility of stable parameters; throws std::invalid_argument.
    void validate() const;

    double total_mass() const;
    double mass_at(double x) const;           // point mass carried at x
    double mass_at_zero() const { return mass_at(0.0); }
    bool is_point_mass_at_zero() const;
    bool positive_support() const;            // support contained in [0, +inf)
    bool nondegenerate() const;                // not a single point mass

    // All point masses (position, mass), including an atom at zero.
    std::vector<std::pair<double, double>> point_masses() const;

    // Pushforward by x -> s*x (s != 0). Marchenko-Pastur is not closed under
    // dilation and is rejected.
    Measure dilate(double s) const;

    // First moment where finite in closed form (atoms, semicircle, MP, point).
    std::optional<double> mean() const;

    std::string describe() const;

  private:
    Repr repr_;
};

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

// Cauchy transform G(z) = int d mu(x) / (z - x), z off the real line
// (and on the negative real axis for positively supported measures).
cplx cauchy_transform(const Measure& mu, ComplexPoint z);
cplx cauchy_transform(const Measure& mu, cplx z);

enum class DerivedKind { F, Psi, Eta, LowerH, UpperH, M };

// F = 1/G, psi(z) = G(1/z)/z - 1, eta(z) = 1 - z/G(1/z),
// h = eta(z)/z, M(z) = 1/eta(1/z), H(z) = M(z)/z.
cplx derived_transform(const Measure& mu, cplx z, DerivedKind kind);

// Generic evaluator plumbing: everything downstream consumes G as a function.
using CauchyFn = std::function<cplx(cplx)>;

CauchyFn cauchy_evaluator(const Measure& mu);

cplx eta_from_cauchy(const CauchyFn& g, cplx z);
cplx derived_from_cauchy(const CauchyFn& g, cplx z, DerivedKind kind);

// eta-transform with the natural domain bookkeeping: defined on H+, extended
// to C \ [0,+inf) when the measure is supported on [0,+inf), and to C- by
// reflection otherwise.
struct EtaMap {
    std::function<cplx(cplx)> eta;   // callable on H+ (C \ [0,inf) when positive)
    bool positive_support = false;
    std::string descriptor;

    cplx operator()(cplx z) const;   // handles reflection / real-axis nudging
    cplx h(cplx z) const { return (*this)(z) / z; }
};

EtaMap eta_map(const Measure& mu);
EtaMap eta_map_from_cauchy(CauchyFn g, bool positive_support, std::string descriptor = {});

// ---------------------------------------------------------------------------
// Stieltjes inversion
// ---------------------------------------------------------------------------

// eps_k = eps0 * factor^k, k = 0..count-1, with two-point Richardson
// extrapolation toward eps -> 0.
struct EpsSchedule {
    double eps0 = 1e-2;
    double factor = 0.5;
    int count = 13;
    double eps(int k) const;
};

struct DensityPoint {
    double x = 0.0;
    double value = 0.0;
    bool singular = false;   // eps-extrapolation did not settle (blow-up)
    bool unreliable = false; // oscillating estimates
};

std::vector<DensityPoint> stieltjes_invert_density(const CauchyFn& g, std::span<const double> x_grid,
                                                   const EpsSchedule& schedule = {});

struct AtomEstimate {
    double mass = 0.0;
    bool reliable = true;
};

// mu({a}) as the extrapolated limit of (i eps) G(a + i eps); estimates below
// 1e-6 are reported as zero.
AtomEstimate atom_mass(const CauchyFn& g, double a, const EpsSchedule& schedule = {});

// ---------------------------------------------------------------------------
// Sampled-transform container
// ---------------------------------------------------------------------------

enum class TransformKind { G, F, Psi, Eta, LowerH, M, T, S, Density };

struct TransformTable {
    TransformKind kind = TransformKind::Density;
    std::vector<std::pair<cplx, cplx>> points;  // (input, output)
    std::string measure_descriptor;
    std::string grid_metadata;

    void require_valid() const;  // nonempty; strictly ordered when inputs real
};

// Chebyshev-spaced grid on (lo, hi), default S/T-domain grid on
// (-1 + 1e-3, -1e-3).
std::vector<double> chebyshev_grid(int n, double lo = -1.0 + 1e-3, double hi = -1e-3);

std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace freeconv
