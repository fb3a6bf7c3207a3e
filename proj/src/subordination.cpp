#include "freeconv/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freeconv/parallel.hpp"

namespace freeconv {

namespace {

// z * h_mu(w) lies in C \ [0,+inf); if rounding collapses it onto the cut,
// nudge to the side the arguments say it came from.
cplx off_cut(cplx zeta, cplx z, cplx h) {
    if (zeta.imag() != 0.0 || zeta.real() < 0.0) return zeta;
    double a = arg_ccw(z) + arg_ccw(h);
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    double nudge = 1e-300 + 1e-16 * std::abs(zeta);
    return zeta + cplx(0.0, a <= kPi ? nudge : -nudge);
}

void require_inputs(const EtaMap& mu, const EtaMap& nu) {
    if (!nu.positive_support)
        throw std::domain_error("the second factor must be supported on [0,+inf)");
    (void)mu;
}

cplx eval_f(const EtaMap& mu, const EtaMap& nu, cplx z, cplx w) {
    cplx hm = mu.h(w);
    cplx zeta = off_cut(z * hm, z, hm);
    return z * nu.h(zeta);
}

cplx eval_g(const EtaMap& mu, const EtaMap& nu, cplx z, cplx w) {
    cplx hn = nu.h(z * w);  // z*w in H+ for z in H+ closure, w in H+
    cplx zeta = off_cut(z * hn, z, hn);
    return mu.h(zeta);
}

}  // namespace

bool SubordinationResult::identities_hold(double tol) const {
    cplx ze = z * eta_conv;
    if (std::abs(ze - omega1 * omega2) > tol * (1.0 + std::abs(ze))) return false;
    double az = arg_ccw(z), a2 = arg_ccw(omega2);
    return a2 >= az - 1e-9 && a2 <= az + kPi + 1e-9;
}

std::pair<SelfMap, SelfMap> build_maps(const EtaMap& mu, const EtaMap& nu, cplx z) {
    require_inputs(mu, nu);
    if (z == 0.0) throw std::domain_error("maps are parametrized by nonzero z");
    if (z.imag() < 0.0) throw std::domain_error("z must lie in the closed upper half-plane");
    SelfMap f{[mu, nu, z](cplx w) { return eval_f(mu, nu, z, w); }, Domain::UpperHalfPlane,
              "f_z" };
    SelfMap g{[mu, nu, z](cplx w) { return eval_g(mu, nu, z, w); }, Domain::UpperHalfPlane,
              "g_z" };
    return {std::move(f), std::move(g)};
}

Subordinator::Subordinator(EtaMap mu, EtaMap nu) : mu_(std::move(mu)), nu_(std::move(nu)) {
    require_inputs(mu_, nu_);
}

Subordinator::Subordinator(const Measure& mu, const Measure& nu)
    : Subordinator(eta_map(mu), eta_map(nu)) {
    if (mu.is_point_mass_at_zero() || nu.is_point_mass_at_zero())
        throw std::domain_error("the point mass at zero has no subordination functions");
}

SubordinationResult Subordinator::solve(cplx z, double tol, int max_iter) {
    if (z == 0.0 || z.imag() < 0.0)
        throw std::domain_error("subordination point must lie in the closed upper half-plane, z != 0");

    SubordinationResult res;
    res.z = z;

    SelfMap f{[this, z](cplx w) { return eval_f(mu_, nu_, z, w); }, Domain::UpperHalfPlane, "f_z"};
    cplx start = (have_warm_ && warm_.imag() > 0.0) ? warm_ : cplx(0.0, 1.0);
    auto [w, rep] = dw_point(f, start, tol, max_iter);
    if (rep.status != SolveStatus::Converged && start != cplx(0.0, 1.0)) {
        // retry cold; warm starts can sit in a slow basin near the boundary
        std::tie(w, rep) = dw_point(f, cplx(0.0, 1.0), tol, max_iter);
    }
    res.omega1 = w;
    res.report1 = rep;
    if (rep.status == SolveStatus::Converged) {
        warm_ = w;
        have_warm_ = true;
    }

    cplx hm = mu_.h(res.omega1);
    res.omega2 = off_cut(z * hm, z, hm);
    res.eta_conv = nu_(res.omega2);

    res.report2 = rep;
    cplx w2 = res.omega2 / z;
    if (w2.imag() > 0.0) {
        res.report2.residual = std::abs(eval_g(mu_, nu_, z, w2) - w2);
        res.report2.boundary_flag = std::abs(res.omega2.imag()) <= 1e-6;
    }
    return res;
}

SubordinationResult subordinate(const EtaMap& mu, const EtaMap& nu, cplx z, double tol) {
    Subordinator s(mu, nu);
    return s.solve(z, tol);
}

SubordinationResult subordinate(const Measure& mu, const Measure& nu, cplx z, double tol) {
    Subordinator s(mu, nu);
    return s.solve(z, tol);
}

EtaMap convolution_eta(const EtaMap& mu, const EtaMap& nu, double tol) {
    auto sub = std::make_shared<Subordinator>(mu, nu);
    EtaMap out;
    out.positive_support = mu.positive_support && nu.positive_support;
    out.descriptor = mu.descriptor + " boxtimes " + nu.descriptor;
    out.eta = [sub, tol](cplx z) { return sub->solve(z, tol).eta_conv; };
    return out;
}

EtaMap convolution_eta(const Measure& mu, const Measure& nu, double tol) {
    return convolution_eta(eta_map(mu), eta_map(nu), tol);
}

CauchyFn cauchy_from_eta(const EtaMap& em, double) {
    return [em](cplx z) -> cplx {
        if (z.imag() == 0.0) throw std::domain_error("Cauchy transform needs z off the real line");
        if (z.imag() < 0.0) {
            cplx w = 1.0 / z;  // in H+
            return w / (1.0 - em(w));
        }
        cplx w = 1.0 / std::conj(z);
        return std::conj(w / (1.0 - em(w)));
    };
}

CauchyFn convolution_cauchy(const Measure& mu, const Measure& nu, double tol) {
    return cauchy_from_eta(convolution_eta(mu, nu, tol));
}

// ---------------------------------------------------------------------------
// Materialized convolution
// ---------------------------------------------------------------------------

double ConvolutionMeasure::density_mass() const {
    double s = 0.0;
    const auto& pts = density_points;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        s += 0.5 * (pts[i].value + pts[i + 1].value) * (pts[i + 1].x - pts[i].x);
    return s;
}

double ConvolutionMeasure::total_mass() const {
    double s = density_mass() + atom_at_zero;
    for (auto [x, w] : atoms) s += w;
    return s;
}

Measure ConvolutionMeasure::to_measure(bool renormalize) const {
    std::vector<double> grid, dens;
    grid.reserve(density_points.size());
    dens.reserve(density_points.size());
    for (const auto& p : density_points) {
        grid.push_back(p.x);
        dens.push_back(p.value);
    }
    double atom_sum = atom_at_zero;
    for (auto [x, w] : atoms) atom_sum += w;
    if (renormalize) {
        double dm = 0.0;
        for (size_t i = 0; i + 1 < grid.size(); ++i)
            dm += 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
        double want = 1.0 - atom_sum;
        if (dm > 0.0 && want > 0.0)
            for (auto& d : dens) d *= want / dm;
    }
    return Measure::grid_density(std::move(grid), std::move(dens), atom_at_zero, atoms);
}

double ConvolutionMeasure::cdf(double x, bool left_limit) const {
    // atoms admit a rounding-scale tolerance: sampled spectra carry O(n eps)
    // perturbations of exactly-degenerate eigenvalues
    double atol = 1e-9 * (1.0 + std::abs(x));
    double s = 0.0;
    if (left_limit ? (0.0 < x - atol) : (0.0 <= x + atol)) s += atom_at_zero;
    for (auto [p, w] : atoms)
        if (left_limit ? (p < x - atol) : (p <= x + atol)) s += w;
    const auto& pts = density_points;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i].x, b = pts[i + 1].x;
        if (x <= a) break;
        double fa = pts[i].value, fb = pts[i + 1].value;
        if (x >= b) {
            s += 0.5 * (fa + fb) * (b - a);
        } else {
            double t = (x - a) / (b - a);
            double fx = fa + (fb - fa) * t;
            s += 0.5 * (fa + fx) * (x - a);
        }
    }
    return s;
}

namespace {

double spread_scale(const Measure& m) {
    double s = 1.0;
    for (auto [x, w] : m.point_masses()) s = std::max(s, std::abs(x));
    if (const auto* p = m.parametric()) {
        if (p->law == Law::Semicircle) s = std::max(s, std::abs(p->a) + 2.0 * std::sqrt(p->b));
        if (p->law == Law::MarchenkoPastur) s = std::max(s, 4.0);
        if (p->law == Law::CauchyDist) s = std::max(s, std::abs(p->a) + p->b);
    }
    if (m.is_grid()) {
        const auto& g = std::get<GridDensityMeasure>(m.repr());
        s = std::max({s, std::abs(g.grid.front()), std::abs(g.grid.back())});
    }
    return s;
}

}  // namespace

ConvolutionMeasure convolve(const Measure& mu, const Measure& nu, std::span<const double> x_grid,
                            const ConvolveOptions& options) {
    if (!nu.positive_support()) throw std::domain_error("second factor must be supported on [0,+inf)");
    ConvolutionMeasure out;
    out.descriptor = mu.describe() + " boxtimes " + nu.describe();

    // Atom at zero and candidate atoms at products of input atom positions.
    out.atom_at_zero = std::max(mu.mass_at_zero(), nu.mass_at_zero());
    auto mu_atoms = mu.point_masses();
    auto nu_atoms = nu.point_masses();
    EpsSchedule sched = options.schedule;
    {
        Subordinator sub(mu, nu);
        auto g_atoms = cauchy_from_eta(convolution_eta(mu, nu, options.tol));
        Subordinator warm(mu, nu);
        auto g_local = cauchy_from_eta(EtaMap{
            [&warm, &options](cplx z) { return warm.solve(z, options.tol).eta_conv; },
            mu.positive_support() && nu.positive_support(), ""});
        for (auto [b, mb] : mu_atoms) {
            for (auto [c, mc] : nu_atoms) {
                if (b * c == 0.0) continue;
                if (mb + mc <= 1.0) continue;
                auto est = atom_mass(g_local, b * c, sched);
                out.atoms.emplace_back(b * c, est.mass);
            }
        }
        std::sort(out.atoms.begin(), out.atoms.end());
    }

    // Density sweep with warm-started chunks.
    double excl = options.origin_exclusion;
    if (excl < 0.0) excl = 1e-3 * spread_scale(mu) * spread_scale(nu);
    std::vector<double> xs;
    xs.reserve(x_grid.size());
    for (double x : x_grid)
        if (options.include_origin || std::abs(x) >= excl) xs.push_back(x);

    std::vector<DensityPoint> pts(xs.size());
    EtaMap em = eta_map(mu), en = eta_map(nu);
    chunked_for(xs.size(), options.chunk, [&](std::size_t begin, std::size_t end) {
        Subordinator sub(em, en);
        CauchyFn g = cauchy_from_eta(EtaMap{
            [&sub, &options](cplx z) { return sub.solve(z, options.tol).eta_conv; },
            em.positive_support && en.positive_support, ""});
        auto part = stieltjes_invert_density(g, std::span<const double>(xs.data() + begin, end - begin),
                                             sched);
        for (std::size_t i = begin; i < end; ++i) pts[i] = part[i - begin];
    }, options.serial);

    // Interpolate across isolated non-converged bulk points.
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        if (pts[i].unreliable && !pts[i - 1].unreliable && !pts[i + 1].unreliable &&
            !pts[i - 1].singular && !pts[i + 1].singular) {
            double t = (pts[i].x - pts[i - 1].x) / (pts[i + 1].x - pts[i - 1].x);
            pts[i].value = pts[i - 1].value + t * (pts[i + 1].value - pts[i - 1].value);
        }
    }

    out.density_points = pts;
    out.density_table.kind = TransformKind::Density;
    out.density_table.measure_descriptor = out.descriptor;
    out.density_table.grid_metadata = "x grid, " + std::to_string(pts.size()) + " points";
    out.density_table.points.reserve(pts.size());
    for (const auto& p : pts) out.density_table.points.emplace_back(cplx(p.x, 0.0), cplx(p.value, 0.0));
    return out;
}

std::vector<double> detect_support_edges(const CauchyFn& g, std::span<const double> x_grid,
                                         double resolution, double threshold,
                                         const EpsSchedule& schedule) {
    auto density_at = [&](double x) {
        std::vector<double> one{x};
        auto pt = stieltjes_invert_density(g, one, schedule)[0];
        return pt.singular ? std::numeric_limits<double>::infinity() : pt.value;
    };
    std::vector<char> inside(x_grid.size());
    std::vector<DensityPoint> pts = stieltjes_invert_density(g, x_grid, schedule);
    for (size_t i = 0; i < pts.size(); ++i) inside[i] = pts[i].singular || pts[i].value > threshold;

    std::vector<double> edges;
    auto refine = [&](double lo, double hi, bool rising) {
        // invariant: density indicator differs at lo and hi
        while (hi - lo > resolution) {
            double mid = 0.5 * (lo + hi);
            bool m = density_at(mid) > threshold;
            if (m == rising) hi = mid; else lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    for (size_t i = 0; i + 1 < x_grid.size(); ++i) {
        if (!inside[i] && inside[i + 1]) edges.push_back(refine(x_grid[i], x_grid[i + 1], true));
        if (inside[i] && !inside[i + 1]) edges.push_back(refine(x_grid[i], x_grid[i + 1], false));
    }
    return edges;
}

std::vector<double> refine_grid_near(std::span<const double> base, std::span<const double> marks,
                                     int levels) {
    std::vector<double> out(base.begin(), base.end());
    if (base.size() < 2) return out;
    double lo = base.front(), hi = base.back();
    double h = (hi - lo) / double(base.size() - 1);
    for (double m : marks) {
        for (int j = 1; j <= levels; ++j) {
            double d = h * std::pow(0.5, j);
            for (double x : {m - d, m + d})
                if (x > lo && x < hi) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ConvolutionMeasure convolve_refined(const Measure& mu, const Measure& nu, double xmin, double xmax,
                                    int base_n, const ConvolveOptions& options,
                                    std::vector<double>* edges_out) {
    auto base = uniform_grid(xmin, xmax, base_n);
    CauchyFn g = cauchy_from_eta(convolution_eta(mu, nu, options.tol));
    auto edges = detect_support_edges(g, base, 1e-5, 1e-3, options.schedule);
    if (edges_out) *edges_out = edges;
    auto grid = refine_grid_near(base, edges);
    return convolve(mu, nu, grid, options);
}

// ---------------------------------------------------------------------------
// B_nu
// ---------------------------------------------------------------------------

EtaMap b_eta(const EtaMap& nu, const EtaMap& mu, double tol) {
    auto sub = std::make_shared<Subordinator>(mu, nu);
    EtaMap out;
    out.positive_support = mu.positive_support;
    out.descriptor = "B[" + nu.descriptor + "](" + mu.descriptor + ")";
    out.eta = [sub, tol](cplx z) { return sub->solve(z, tol).omega2; };
    return out;
}

EtaMap b_eta(const Measure& nu, const Measure& mu, double tol) {
    if (nu.is_point_mass_at_zero()) throw std::domain_error("B requires nu != delta_0");
    if (const auto* p = mu.parametric(); p && p->law == Law::PointMass) {
        double a = p->a;
        EtaMap out;
        out.positive_support = a >= 0.0;
        out.descriptor = "B(" + mu.describe() + ")";
        out.eta = [a](cplx z) { return a * z; };
        return out;
    }
    return b_eta(eta_map(nu), eta_map(mu), tol);
}

Measure b_map(const Measure& nu, const Measure& mu, std::span<const double> x_grid,
              const ConvolveOptions& options) {
    if (nu.is_point_mass_at_zero()) throw std::domain_error("B requires nu != delta_0");
    if (const auto* p = mu.parametric(); p && p->law == Law::PointMass) return mu;  // B_nu(delta_a) = delta_a
    EtaMap em = b_eta(nu, mu, options.tol);
    CauchyFn g = cauchy_from_eta(em);
    auto pts = stieltjes_invert_density(g, x_grid, options.schedule);
    std::vector<double> grid, dens;
    for (const auto& pt : pts) {
        grid.push_back(pt.x);
        dens.push_back(pt.value);
    }
    auto atom0 = atom_mass(g, 0.0, options.schedule);
    double dm = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) dm += 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
    double want = 1.0 - atom0.mass;
    if (dm > 0.0 && want > 0.0)
        for (auto& d : dens) d *= want / dm;
    return Measure::grid_density(std::move(grid), std::move(dens), atom0.mass);
}

}  // namespace freeconv
