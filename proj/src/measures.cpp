#include "freeconv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace freeconv {

namespace {

constexpr double kMassTol = 1e-12;

double trapezoid_mass(const GridDensityMeasure& g) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < g.grid.size(); ++i)
        s += 0.5 * (g.density[i] + g.density[i + 1]) * (g.grid[i + 1] - g.grid[i]);
    return s;
}

// 16-point Gauss-Legendre nodes/weights on [-1,1] (positive half).
struct GL16 {
    static constexpr double x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                    0.9445750230732326, 0.9894009349916499};
    static constexpr double w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                    0.0622535239386479, 0.0271524594117541};
};

cplx gl16_cell(double a, double b, double fa, double fb, cplx z) {
    // integrand: linear density interpolant over 1/(z - x)
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double slope = (fb - fa) / (b - a);
    auto f = [&](double x) { return (fa + slope * (x - a)) / (z - x); };
    cplx s = 0.0;
    for (int i = 0; i < 8; ++i) {
        double d = h * GL16::x[i];
        s += GL16::w[i] * (f(c + d) + f(c - d));
    }
    return s * h;
}

cplx adaptive_cell(double a, double b, double fa, double fb, cplx z, int depth) {
    cplx whole = gl16_cell(a, b, fa, fb, z);
    double m = 0.5 * (a + b);
    double fm = 0.5 * (fa + fb);
    cplx split = gl16_cell(a, m, fa, fm, z) + gl16_cell(m, b, fm, fb, z);
    if (depth <= 0 || std::abs(whole - split) <= 1e-12 * (1.0 + std::abs(split))) return split;
    return adaptive_cell(a, m, fa, fm, z, depth - 1) + adaptive_cell(m, b, fm, fb, z, depth - 1);
}

cplx cauchy_atomic(const AtomicMeasure& m, cplx z) {
    cplx s = 0.0;
    for (auto [x, w] : m.atoms) s += w / (z - x);
    return s;
}

cplx cauchy_grid(const GridDensityMeasure& g, cplx z) {
    cplx s = 0.0;
    if (g.atom_at_zero > 0.0) s += g.atom_at_zero / z;
    for (auto [x, w] : g.atoms) s += w / (z - x);
    for (size_t i = 0; i + 1 < g.grid.size(); ++i) {
        if (g.density[i] == 0.0 && g.density[i + 1] == 0.0) continue;
        s += adaptive_cell(g.grid[i], g.grid[i + 1], g.density[i], g.density[i + 1], z, 24);
    }
    return s;
}

cplx cauchy_mp(cplx z) {
    cplx root = std::sqrt(z) * std::sqrt(z - 4.0);
    return (z - root) / (2.0 * z);
}

cplx cauchy_parametric(const ParametricLaw& p, cplx z) {
    switch (p.law) {
        case Law::PointMass:
            return 1.0 / (z - p.a);
        case Law::Semicircle: {
            cplx zc = z - p.a;
            return (zc - sqrt_asym_linear(zc, 4.0 * p.b)) / (2.0 * p.b);
        }
        case Law::MarchenkoPastur:
            return cauchy_mp(z);
        case Law::CauchyDist:
            return z.imag() >= 0.0 ? 1.0 / (z - p.a + cplx(0, 1) * p.b)
                                   : 1.0 / (z - p.a - cplx(0, 1) * p.b);
        case Law::FreeStable:
            return free_stable_cauchy(p.stable, z);
        case Law::BooleanStable: {
            // G = 1/F with F(z) = z (1 - eta(1/z))
            cplx f = z * (1.0 - boolean_stable_eta(p.stable, 1.0 / z));
            return 1.0 / f;
        }
    }
    throw std::logic_error("unknown law");
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure
// ---------------------------------------------------------------------------

Measure Measure::atomic(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    return Measure(Repr{AtomicMeasure{std::move(atoms)}});
}

Measure Measure::grid_density(std::vector<double> grid, std::vector<double> density,
                              double atom_at_zero, std::vector<std::pair<double, double>> atoms) {
    return Measure(Repr{GridDensityMeasure{std::move(grid), std::move(density), atom_at_zero, std::move(atoms)}});
}

Measure Measure::point_mass(double a) { return Measure(Repr{ParametricLaw{Law::PointMass, a, 0.0, {}}}); }

Measure Measure::semicircle(double mean, double variance) {
    return Measure(Repr{ParametricLaw{Law::Semicircle, mean, variance, {}}});
}

Measure Measure::marchenko_pastur() { return Measure(Repr{ParametricLaw{Law::MarchenkoPastur, 0.0, 0.0, {}}}); }

Measure Measure::cauchy(double a, double b) { return Measure(Repr{ParametricLaw{Law::CauchyDist, a, b, {}}}); }

Measure Measure::free_stable(double alpha, double rho, double scale) {
    StableParams p{alpha, rho, StableParams::Family::Free, scale};
    return Measure(Repr{ParametricLaw{Law::FreeStable, 0.0, 0.0, p}});
}

Measure Measure::boolean_stable(double alpha, double rho, double scale) {
    StableParams p{alpha, rho, StableParams::Family::Boolean, scale};
    return Measure(Repr{ParametricLaw{Law::BooleanStable, 0.0, 0.0, p}});
}

void Measure::validate() const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        if (m->atoms.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
        double mass = 0.0;
        for (size_t i = 0; i < m->atoms.size(); ++i) {
            auto [x, w] = m->atoms[i];
            if (!(w > 0.0 && w <= 1.0 + kMassTol)) throw std::invalid_argument("atom mass outside (0,1]");
            if (i > 0 && !(m->atoms[i - 1].first < x))
                throw std::invalid_argument("atom positions must be pairwise distinct");
            mass += w;
        }
        if (std::abs(mass - 1.0) > kMassTol) throw std::invalid_argument("unnormalized measure");
    } else if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        if (g->grid.size() < 2 || g->grid.size() != g->density.size())
            throw std::invalid_argument("grid/density size mismatch");
        for (size_t i = 0; i + 1 < g->grid.size(); ++i)
            if (!(g->grid[i] < g->grid[i + 1])) throw std::invalid_argument("grid must be strictly increasing");
        for (double d : g->density)
            if (d < 0.0) throw std::invalid_argument("density must be nonnegative");
        if (g->atom_at_zero < 0.0 || g->atom_at_zero >= 1.0)
            throw std::invalid_argument("atom at zero outside [0,1)");
        double mass = trapezoid_mass(*g) + g->atom_at_zero;
        for (auto [x, w] : g->atoms) {
            if (x == 0.0) throw std::invalid_argument("zero atom belongs in atom_at_zero");
            if (!(w > 0.0)) throw std::invalid_argument("atom mass must be positive");
            mass += w;
        }
        if (std::abs(mass - 1.0) > kMassTol) throw std::invalid_argument("unnormalized measure");
    } else {
        const auto& p = std::get<ParametricLaw>(repr_);
        switch (p.law) {
            case Law::Semicircle:
                if (!(p.b > 0.0)) throw std::invalid_argument("semicircle variance must be positive");
                break;
            case Law::CauchyDist:
                if (!(p.b > 0.0)) throw std::invalid_argument("Cauchy scale must be positive");
                break;
            case Law::FreeStable:
            case Law::BooleanStable:
                if (!p.stable.admissible()) throw std::invalid_argument("stable parameters not admissible");
                break;
            default:
                break;
        }
    }
}

double Measure::total_mass() const { return 1.0; }

double Measure::mass_at(double x) const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        for (auto [p, w] : m->atoms)
            if (p == x) return w;
        return 0.0;
    }
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        if (x == 0.0) return g->atom_at_zero;
        for (auto [p, w] : g->atoms)
            if (p == x) return w;
        return 0.0;
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    if (p.law == Law::PointMass) return p.a == x ? 1.0 : 0.0;
    if (p.law == Law::BooleanStable) {
        if (auto atom = boolean_stable_atom(p.stable); atom && atom->first == x) return atom->second;
    }
    if (p.law == Law::FreeStable && p.stable.alpha == 1.0) {
        if (p.stable.rho == 1.0 && x == p.stable.scale) return 1.0;
        if (p.stable.rho == 0.0 && x == -p.stable.scale) return 1.0;
    }
    return 0.0;
}

bool Measure::is_point_mass_at_zero() const {
    const auto* p = std::get_if<ParametricLaw>(&repr_);
    if (p && p->law == Law::PointMass) return p->a == 0.0;
    const auto* m = std::get_if<AtomicMeasure>(&repr_);
    return m && m->atoms.size() == 1 && m->atoms[0].first == 0.0;
}

bool Measure::positive_support() const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        return std::all_of(m->atoms.begin(), m->atoms.end(), [](auto a) { return a.first >= 0.0; });
    }
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        bool atoms_ok = std::all_of(g->atoms.begin(), g->atoms.end(), [](auto a) { return a.first >= 0.0; });
        // leading zero-density nodes below 0 do not carry support
        double lo = g->grid.front();
        for (size_t i = 0; i < g->grid.size(); ++i) {
            if (g->density[i] > 0.0) { lo = g->grid[i == 0 ? 0 : i - 1]; break; }
            lo = g->grid[i];
        }
        return atoms_ok && lo >= 0.0;
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    switch (p.law) {
        case Law::PointMass: return p.a >= 0.0;
        case Law::Semicircle: return p.a - 2.0 * std::sqrt(p.b) >= 0.0;
        case Law::MarchenkoPastur: return true;
        case Law::CauchyDist: return false;
        case Law::FreeStable:
        case Law::BooleanStable: return p.stable.rho == 1.0;
    }
    return false;
}

bool Measure::nondegenerate() const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) return m->atoms.size() > 1;
    if (const auto* p = std::get_if<ParametricLaw>(&repr_)) {
        if (p->law == Law::PointMass) return false;
        if (p->law == Law::BooleanStable || p->law == Law::FreeStable)
            return !(p->stable.alpha == 1.0 && (p->stable.rho == 0.0 || p->stable.rho == 1.0));
        return true;
    }
    return true;
}

std::vector<std::pair<double, double>> Measure::point_masses() const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) return m->atoms;
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        auto out = g->atoms;
        if (g->atom_at_zero > 0.0) out.emplace_back(0.0, g->atom_at_zero);
        std::sort(out.begin(), out.end());
        return out;
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    if (p.law == Law::PointMass) return {{p.a, 1.0}};
    if (p.law == Law::BooleanStable) {
        if (auto atom = boolean_stable_atom(p.stable)) return {*atom};
    }
    if (p.law == Law::FreeStable && p.stable.alpha == 1.0 && (p.stable.rho == 0.0 || p.stable.rho == 1.0))
        return {{p.stable.rho == 1.0 ? p.stable.scale : -p.stable.scale, 1.0}};
    return {};
}

Measure Measure::dilate(double s) const {
    if (s == 0.0) throw std::invalid_argument("dilation factor must be nonzero");
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        std::vector<std::pair<double, double>> atoms;
        atoms.reserve(m->atoms.size());
        for (auto [x, w] : m->atoms) atoms.emplace_back(s * x, w);
        return Measure::atomic(std::move(atoms));
    }
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        std::vector<double> grid(g->grid), dens(g->density);
        for (auto& x : grid) x *= s;
        for (auto& d : dens) d /= std::abs(s);
        if (s < 0.0) {
            std::reverse(grid.begin(), grid.end());
            std::reverse(dens.begin(), dens.end());
        }
        auto atoms = g->atoms;
        for (auto& [x, w] : atoms) x *= s;
        std::sort(atoms.begin(), atoms.end());
        return Measure::grid_density(std::move(grid), std::move(dens), g->atom_at_zero, std::move(atoms));
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    switch (p.law) {
        case Law::PointMass: return Measure::point_mass(s * p.a);
        case Law::Semicircle: return Measure::semicircle(s * p.a, s * s * p.b);
        case Law::CauchyDist: return Measure::cauchy(s * p.a, std::abs(s) * p.b);
        case Law::FreeStable:
            if (s > 0.0) return Measure::free_stable(p.stable.alpha, p.stable.rho, s * p.stable.scale);
            return Measure::free_stable(p.stable.alpha, 1.0 - p.stable.rho, -s * p.stable.scale);
        case Law::BooleanStable:
            if (s > 0.0) return Measure::boolean_stable(p.stable.alpha, p.stable.rho, s * p.stable.scale);
            return Measure::boolean_stable(p.stable.alpha, 1.0 - p.stable.rho, -s * p.stable.scale);
        case Law::MarchenkoPastur:
            throw std::domain_error("Marchenko-Pastur has no parametric dilation here");
    }
    throw std::logic_error("unknown law");
}

std::optional<double> Measure::mean() const {
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        double s = 0.0;
        for (auto [x, w] : m->atoms) s += x * w;
        return s;
    }
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        double s = 0.0;
        for (size_t i = 0; i + 1 < g->grid.size(); ++i) {
            double a = g->grid[i], b = g->grid[i + 1], fa = g->density[i], fb = g->density[i + 1];
            s += (b - a) * (fa * (2 * a + b) + fb * (a + 2 * b)) / 6.0;
        }
        for (auto [x, w] : g->atoms) s += x * w;
        return s;
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    switch (p.law) {
        case Law::PointMass: return p.a;
        case Law::Semicircle: return p.a;
        case Law::MarchenkoPastur: return 1.0;
        default: return std::nullopt;
    }
}

std::string Measure::describe() const {
    std::ostringstream os;
    if (const auto* m = std::get_if<AtomicMeasure>(&repr_)) {
        os << "atomic:";
        for (auto [x, w] : m->atoms) os << "(" << x << "," << w << ")";
        return os.str();
    }
    if (const auto* g = std::get_if<GridDensityMeasure>(&repr_)) {
        os << "grid[" << g->grid.size() << " nodes, " << g->grid.front() << ".." << g->grid.back() << "]";
        if (g->atom_at_zero > 0) os << "+atom0(" << g->atom_at_zero << ")";
        for (auto [x, w] : g->atoms) os << "+atom(" << x << "," << w << ")";
        return os.str();
    }
    const auto& p = std::get<ParametricLaw>(repr_);
    switch (p.law) {
        case Law::PointMass: os << "point a=" << p.a; break;
        case Law::Semicircle: os << "semicircle a=" << p.a << " v=" << p.b; break;
        case Law::MarchenkoPastur: os << "mp"; break;
        case Law::CauchyDist: os << "cauchy a=" << p.a << " b=" << p.b; break;
        case Law::FreeStable:
            os << "freestable alpha=" << p.stable.alpha << " rho=" << p.stable.rho;
            if (p.stable.scale != 1.0) os << " scale=" << p.stable.scale;
            break;
        case Law::BooleanStable:
            os << "booleanstable alpha=" << p.stable.alpha << " rho=" << p.stable.rho;
            if (p.stable.scale != 1.0) os << " scale=" << p.stable.scale;
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

cplx cauchy_transform(const Measure& mu, ComplexPoint z) {
    z.require_valid();
    if (!z.boundary_limit && z.value.imag() == 0.0 && !mu.positive_support())
        throw std::domain_error("Cauchy transform needs z off the real line");
    return cauchy_transform(mu, z.value);
}

cplx cauchy_transform(const Measure& mu, cplx z) {
    return std::visit([&](const auto& repr) -> cplx {
        using T = std::decay_t<decltype(repr)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) return cauchy_atomic(repr, z);
        else if constexpr (std::is_same_v<T, GridDensityMeasure>) return cauchy_grid(repr, z);
        else return cauchy_parametric(repr, z);
    }, mu.repr());
}

cplx eta_from_cauchy(const CauchyFn& g, cplx z) {
    cplx gz = g(1.0 / z);
    if (std::abs(gz) < 1e-300) throw std::domain_error("evaluation at a zero of the Cauchy transform");
    return 1.0 - z / gz;
}

cplx derived_from_cauchy(const CauchyFn& g, cplx z, DerivedKind kind) {
    switch (kind) {
        case DerivedKind::F: {
            cplx gz = g(z);
            if (std::abs(gz) < 1e-300) throw std::domain_error("evaluation at a zero of the Cauchy transform");
            return 1.0 / gz;
        }
        case DerivedKind::Psi: {
            cplx gz = g(1.0 / z);
            return gz / z - 1.0;
        }
        case DerivedKind::Eta:
            return eta_from_cauchy(g, z);
        case DerivedKind::LowerH:
            return eta_from_cauchy(g, z) / z;
        case DerivedKind::M: {
            cplx e = eta_from_cauchy(g, 1.0 / z);
            if (std::abs(e) < 1e-300) throw std::domain_error("evaluation at a zero of the eta transform");
            return 1.0 / e;
        }
        case DerivedKind::UpperH: {
            cplx e = eta_from_cauchy(g, 1.0 / z);
            if (std::abs(e) < 1e-300) throw std::domain_error("evaluation at a zero of the eta transform");
            return 1.0 / (z * e);
        }
    }
    throw std::logic_error("unknown transform kind");
}

CauchyFn cauchy_evaluator(const Measure& mu) {
    if (const auto* p = mu.parametric(); p && p->law == Law::FreeStable && p->stable.alpha != 1.0 &&
                                         p->stable.alpha != 2.0) {
        // warm-started solver instance; cheap to copy per thread
        auto solver = std::make_shared<FreeStableCauchy>(p->stable);
        return [solver](cplx z) { return (*solver)(z); };
    }
    Measure copy = mu;
    return [copy](cplx z) { return cauchy_transform(copy, z); };
}

cplx derived_transform(const Measure& mu, cplx z, DerivedKind kind) {
    return derived_from_cauchy(cauchy_evaluator(mu), z, kind);
}

// ---------------------------------------------------------------------------
// EtaMap
// ---------------------------------------------------------------------------

cplx EtaMap::operator()(cplx z) const {
    if (z.imag() > 0.0) return eta(z);
    if (positive_support) {
        if (z.imag() < 0.0) return std::conj(eta(std::conj(z)));
        if (z.real() < 0.0) {
            // boundary value on the negative axis: real by symmetry
            cplx v = eta(cplx(z.real(), 1e-14 * (1.0 + std::abs(z.real()))));
            return cplx(v.real(), 0.0);
        }
        throw std::domain_error("eta evaluated on [0,+inf)");
    }
    if (z.imag() < 0.0) return std::conj(eta(std::conj(z)));
    throw std::domain_error("eta evaluated on the real line");
}

EtaMap eta_map_from_cauchy(CauchyFn g, bool positive, std::string descriptor) {
    EtaMap out;
    out.positive_support = positive;
    out.descriptor = std::move(descriptor);
    out.eta = [g = std::move(g)](cplx z) { return eta_from_cauchy(g, z); };
    return out;
}

EtaMap eta_map(const Measure& mu) {
    if (mu.is_point_mass_at_zero()) throw std::domain_error("eta of the point mass at zero is trivial");
    const auto* p = mu.parametric();
    if (p && p->law == Law::BooleanStable) {
        StableParams sp = p->stable;
        EtaMap out;
        out.positive_support = mu.positive_support();
        out.descriptor = mu.describe();
        out.eta = [sp](cplx z) { return boolean_stable_eta(sp, z); };
        return out;
    }
    if (p && p->law == Law::MarchenkoPastur) {
        EtaMap out;
        out.positive_support = true;
        out.descriptor = "mp";
        out.eta = [](cplx z) { return (1.0 - std::sqrt(1.0 - 4.0 * z)) / 2.0; };
        return out;
    }
    if (p && p->law == Law::PointMass) {
        double a = p->a;
        EtaMap out;
        out.positive_support = a >= 0.0;
        out.descriptor = mu.describe();
        out.eta = [a](cplx z) { return a * z; };
        return out;
    }
    return eta_map_from_cauchy(cauchy_evaluator(mu), mu.positive_support(), mu.describe());
}

// ---------------------------------------------------------------------------
// Stieltjes inversion
// ---------------------------------------------------------------------------

double EpsSchedule::eps(int k) const { return eps0 * std::pow(factor, k); }

namespace {

struct Extrapolation {
    double value = 0.0;
    bool converged = false;
    bool growing = false;
    bool oscillating = false;
};

Extrapolation richardson(const std::vector<double>& vals, double q, double rel_tol) {
    Extrapolation out;
    const int n = int(vals.size());
    if (n < 3) { out.value = vals.back(); return out; }
    std::vector<double> rich(n - 1);
    for (int k = 0; k + 1 < n; ++k) rich[k] = (vals[k + 1] - q * vals[k]) / (1.0 - q);
    double best_gap = std::numeric_limits<double>::infinity();
    for (int k = 1; k + 1 < n; ++k) {
        double gap = std::abs(rich[k + 1] - rich[k]);
        double scale = 1.0 + std::abs(rich[k + 1]);
        if (gap <= rel_tol * scale) {
            out.value = rich[k + 1];
            out.converged = true;
        }
        best_gap = std::min(best_gap, gap / scale);
    }
    if (!out.converged) out.value = rich.back();
    int grow = 0, sign_flips = 0;
    for (int k = 0; k + 1 < n; ++k) {
        if (std::abs(vals[k + 1]) > std::abs(vals[k]) * 1.2) ++grow;
        if (k + 2 < n && (vals[k + 2] - vals[k + 1]) * (vals[k + 1] - vals[k]) < 0.0) ++sign_flips;
    }
    out.growing = grow >= n - 3;
    out.oscillating = sign_flips >= n / 2;
    return out;
}

}  // namespace

std::vector<DensityPoint> stieltjes_invert_density(const CauchyFn& g, std::span<const double> x_grid,
                                                   const EpsSchedule& schedule) {
    std::vector<DensityPoint> out(x_grid.size());
    for (size_t i = 0; i < x_grid.size(); ++i) {
        double x = x_grid[i];
        std::vector<double> vals(schedule.count);
        for (int k = 0; k < schedule.count; ++k)
            vals[k] = -g(cplx(x, schedule.eps(k))).imag() / kPi;
        auto ex = richardson(vals, schedule.factor, 1e-7);
        DensityPoint pt;
        pt.x = x;
        pt.value = ex.value;
        if (!ex.converged) {
            if (ex.growing) pt.singular = true;
            else pt.unreliable = true;
        }
        if (pt.value < 0.0) {
            if (pt.value > -1e-8) pt.value = 0.0;
            else { pt.value = 0.0; pt.unreliable = true; }
        }
        out[i] = pt;
    }
    return out;
}

AtomEstimate atom_mass(const CauchyFn& g, double a, const EpsSchedule& schedule) {
    std::vector<double> vals(schedule.count);
    for (int k = 0; k < schedule.count; ++k) {
        double eps = schedule.eps(k);
        vals[k] = (cplx(0.0, eps) * g(cplx(a, eps))).real();
    }
    auto ex = richardson(vals, schedule.factor, 1e-6);
    AtomEstimate out;
    out.mass = ex.value;
    out.reliable = ex.converged || !ex.oscillating;
    if (std::abs(out.mass) < 1e-6) out.mass = 0.0;
    if (out.mass < 0.0) { out.mass = 0.0; out.reliable = false; }
    return out;
}

// ---------------------------------------------------------------------------
// TransformTable helpers
// ---------------------------------------------------------------------------

void TransformTable::require_valid() const {
    if (points.empty()) throw std::invalid_argument("transform table must be nonempty");
    bool all_real = std::all_of(points.begin(), points.end(), [](auto& p) { return p.first.imag() == 0.0; });
    if (all_real) {
        for (size_t i = 0; i + 1 < points.size(); ++i)
            if (!(points[i].first.real() < points[i + 1].first.real()))
                throw std::invalid_argument("real inputs must be strictly ordered");
    }
}

std::vector<double> chebyshev_grid(int n, double lo, double hi) {
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) {
        double t = std::cos(kPi * (2.0 * k + 1.0) / (2.0 * n));  // in (-1,1)
        out[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / double(n - 1);
    return out;
}

}  // namespace freeconv
