#include "freeconv/powers.hpp"

#include <cmath>
#include <stdexcept>

namespace freeconv {

FMap f_map_from_cauchy(CauchyFn g, double mass_at_zero, std::string descriptor) {
    FMap out;
    out.mass_at_zero = mass_at_zero;
    out.descriptor = std::move(descriptor);
    out.F = [g = std::move(g)](cplx z) -> cplx {
        cplx gz = g(z);
        if (std::abs(gz) < 1e-300) throw std::domain_error("evaluation at a zero of the Cauchy transform");
        return 1.0 / gz;
    };
    return out;
}

FMap f_map(const Measure& mu) {
    return f_map_from_cauchy(cauchy_evaluator(mu), mu.mass_at_zero(), mu.describe());
}

FMap f_map_from_eta(const EtaMap& em, double mass_at_zero) {
    FMap out;
    out.mass_at_zero = mass_at_zero;
    out.descriptor = em.descriptor;
    out.F = [em](cplx z) -> cplx {
        // F(z) = z (1 - eta(1/z)); 1/z lies in H+ for z in C-
        if (z.imag() == 0.0) z += cplx(0.0, -1e-14 * (1.0 + std::abs(z)));
        return z * (1.0 - em(1.0 / z));
    };
    return out;
}

void PowerEvaluator::require_valid() const {
    switch (kind) {
        case Kind::FreeAdditive:
            if (t >= 1.0) return;
            if (const auto* p = base.parametric();
                p && (p->law == Law::FreeStable || p->law == Law::Semicircle) && t > 0.0)
                return;  // declared boxplus-divisible families
            throw std::domain_error("free additive power needs t >= 1 (or a divisible family)");
        case Kind::Boolean:
            if (!(t >= 0.0)) throw std::domain_error("Boolean power needs t >= 0");
            return;
        case Kind::FreeMultiplicative: {
            const auto* p = base.parametric();
            bool ok = p && (p->law == Law::MarchenkoPastur ||
                            ((p->law == Law::FreeStable || p->law == Law::BooleanStable) && p->stable.rho == 1.0));
            if (!ok || !(t > 0.0))
                throw std::domain_error("multiplicative powers are supported for declared positive laws only");
            return;
        }
    }
}

std::pair<cplx, ConvergenceReport> sigma_point(const FMap& mu, double t, cplx z, double tol, cplx warm_start,
                                               int max_iter) {
    if (!(t >= 1.0)) throw std::domain_error("sigma is defined for t >= 1");
    if (z.imag() > 0.0) throw std::domain_error("sigma lives on the closed lower half-plane");
    if (t == 1.0) {
        ConvergenceReport rep;
        rep.status = SolveStatus::Converged;
        rep.tolerance = tol;
        rep.boundary_flag = std::abs(z.imag()) <= 1e-6;
        return {z, rep};
    }
    SelfMap L{[&mu, t, z](cplx w) { return z + (t - 1.0) * (mu.F(w) - w); }, Domain::LowerHalfPlane,
              "L"};
    cplx w0 = (warm_start.imag() < 0.0) ? warm_start : cplx(0.0, -1.0);
    auto [w, rep] = dw_point(L, w0, tol, max_iter);
    if (rep.status != SolveStatus::Converged && w0 != cplx(0.0, -1.0)) {
        std::tie(w, rep) = dw_point(L, cplx(0.0, -1.0), tol, max_iter);
    }
    return {w, rep};
}

cplx sigma(const Measure& mu, double t, cplx z, double tol) {
    if (mu.is_point_mass_at_zero()) return z;  // F = id makes the map constant at z
    return sigma_point(f_map(mu), t, z, tol).first;
}

cplx free_additive_power_F(const FMap& mu, double t, cplx z, double tol) {
    if (!(t > 1.0)) throw std::domain_error("additive power F needs t > 1");
    auto [s, rep] = sigma_point(mu, t, z, tol);
    if (rep.status == SolveStatus::Diverged) throw std::runtime_error("sigma solve diverged");
    return (t * s - z) / (t - 1.0);
}

cplx free_additive_power_F(const Measure& mu, double t, cplx z, double tol) {
    if (mu.is_point_mass_at_zero()) return z;
    return free_additive_power_F(f_map(mu), t, z, tol);
}

EtaMap free_additive_power_eta(const FMap& fm, double t, bool positive_support, double tol) {
    EtaMap out;
    out.positive_support = positive_support;
    out.descriptor = fm.descriptor + "^boxplus" + std::to_string(t);
    if (t == 1.0) {
        FMap base = fm;
        out.eta = [base](cplx z) { return 1.0 - z * base.F(1.0 / z); };
        return out;
    }
    FMap base = fm;
    // warm start shared across calls; clone per thread for parallel use
    auto warm = std::make_shared<cplx>(cplx(0.0, -1.0));
    out.eta = [base, t, tol, warm](cplx z) {
        cplx w = 1.0 / z;  // z in H+ -> w in C-
        auto [s, rep] = sigma_point(base, t, w, tol, *warm);
        if (rep.status == SolveStatus::Converged && s.imag() < 0.0) *warm = s;
        cplx Fp = (t * s - w) / (t - 1.0);
        return 1.0 - z * Fp;
    };
    return out;
}

EtaMap free_additive_power_eta(const Measure& mu, double t, double tol) {
    return free_additive_power_eta(f_map(mu), t, mu.positive_support(), tol);
}

EtaMap boolean_power_eta(const EtaMap& em, double t) {
    if (!(t >= 0.0)) throw std::domain_error("Boolean power needs t >= 0");
    EtaMap out;
    out.positive_support = em.positive_support;
    out.descriptor = em.descriptor + "^uplus" + std::to_string(t);
    out.eta = [em, t](cplx z) { return t * em(z); };
    return out;
}

namespace {

// Atoms of mu^{uplus t} for atomic mu: real zeros of phi(x) = (1-t)x + t F(x)
// with masses 1/phi'(x0); remaining mass is absolutely continuous.
std::vector<std::pair<double, double>> boolean_power_atoms(const AtomicMeasure& m, double t) {
    auto G = [&](cplx z) {
        cplx s = 0.0;
        for (auto [x, w] : m.atoms) s += w / (z - x);
        return s;
    };
    auto Gp = [&](cplx z) {
        cplx s = 0.0;
        for (auto [x, w] : m.atoms) s -= w / ((z - x) * (z - x));
        return s;
    };
    auto phi = [&](double x) {
        cplx g = G(cplx(x, 0.0));
        return (1.0 - t) * x + t / g.real();
    };
    auto phi_prime = [&](double x) {
        cplx g = G(cplx(x, 0.0)), gp = Gp(cplx(x, 0.0));
        return (1.0 - t) - t * gp.real() / (g.real() * g.real());
    };
    double lo = m.atoms.front().first, hi = m.atoms.back().first;
    double span = std::max(1.0, hi - lo);
    lo -= 4.0 * span * std::max(1.0, t);
    hi += 4.0 * span * std::max(1.0, t);
    std::vector<std::pair<double, double>> atoms;
    const int n = 200000;
    double prev_x = lo, prev_p = phi(prev_x);
    bool prev_ok = std::isfinite(prev_p);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        // skip the atoms of mu themselves (poles of G are zeros of F, fine; the
        // poles of F sit at zeros of G between atoms)
        double p = phi(x);
        bool ok = std::isfinite(p);
        if (prev_ok && ok && prev_p * p < 0.0 && std::abs(p - prev_p) < 1e3 * span) {
            double a = prev_x, b = x;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (a + b);
                if (phi(a) * phi(mid) <= 0.0) b = mid; else a = mid;
            }
            double x0 = 0.5 * (a + b);
            if (std::abs(phi(x0)) < 1e-5 * span) {  // genuine zero, not a pole crossing
                double mass = 1.0 / phi_prime(x0);
                if (mass > 1e-12 && mass <= 1.0 + 1e-9) atoms.emplace_back(x0, std::min(mass, 1.0));
            }
        }
        prev_x = x;
        prev_p = p;
        prev_ok = ok;
    }
    return atoms;
}

}  // namespace

Measure boolean_power(const Measure& mu, double t, std::span<const double> x_grid,
                      const EpsSchedule& schedule) {
    if (!(t >= 0.0)) throw std::domain_error("Boolean power needs t >= 0");
    if (t == 0.0) return Measure::point_mass(0.0);
    if (t == 1.0) return mu;
    if (const auto* p = mu.parametric()) {
        if (p->law == Law::PointMass) return Measure::point_mass(t * p->a);
        if (p->law == Law::BooleanStable) {
            const auto& sp = p->stable;
            return Measure::boolean_stable(sp.alpha, sp.rho, sp.scale * std::pow(t, 1.0 / sp.alpha));
        }
    }
    if (mu.is_atomic()) {
        const auto& am = std::get<AtomicMeasure>(mu.repr());
        auto atoms = boolean_power_atoms(am, t);
        double atom_mass_total = 0.0;
        for (auto [x, w] : atoms) atom_mass_total += w;
        if (atom_mass_total > 1.0 - 1e-9 && !atoms.empty()) {
            // purely atomic result; renormalize roundoff
            for (auto& [x, w] : atoms) w /= atom_mass_total;
            double zero_mass = 0.0;
            std::vector<std::pair<double, double>> off_zero;
            for (auto [x, w] : atoms) {
                if (std::abs(x) < 1e-12) zero_mass += w; else off_zero.emplace_back(x, w);
            }
            if (off_zero.size() == atoms.size()) return Measure::atomic(std::move(off_zero));
            std::vector<std::pair<double, double>> all = off_zero;
            all.emplace_back(0.0, zero_mass);
            return Measure::atomic(std::move(all));
        }
        if (x_grid.empty()) throw std::invalid_argument("Boolean power needs a grid to materialize a density");
        EtaMap em = boolean_power_eta(eta_map(mu), t);
        CauchyFn g = cauchy_from_eta(em);
        auto pts = stieltjes_invert_density(g, x_grid, schedule);
        std::vector<double> grid, dens;
        for (auto& pt : pts) { grid.push_back(pt.x); dens.push_back(pt.value); }
        double dm = 0.0;
        for (size_t i = 0; i + 1 < grid.size(); ++i)
            dm += 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
        double zero_mass = 0.0;
        std::vector<std::pair<double, double>> off_zero;
        for (auto [x, w] : atoms) {
            if (std::abs(x) < 1e-12) zero_mass += w; else off_zero.emplace_back(x, w);
        }
        double want = 1.0 - atom_mass_total;
        if (dm > 0.0 && want > 0.0)
            for (auto& d : dens) d *= want / dm;
        return Measure::grid_density(std::move(grid), std::move(dens), zero_mass, std::move(off_zero));
    }
    if (x_grid.empty()) throw std::invalid_argument("Boolean power needs a grid to materialize a density");
    EtaMap em = boolean_power_eta(eta_map(mu), t);
    CauchyFn g = cauchy_from_eta(em);
    auto pts = stieltjes_invert_density(g, x_grid, schedule);
    std::vector<double> grid, dens;
    for (auto& pt : pts) { grid.push_back(pt.x); dens.push_back(pt.value); }
    auto a0 = atom_mass(g, 0.0, schedule);
    double dm = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        dm += 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
    double want = 1.0 - a0.mass;
    if (dm > 0.0 && want > 0.0)
        for (auto& d : dens) d *= want / dm;
    return Measure::grid_density(std::move(grid), std::move(dens), a0.mass);
}

EtaMap mp_boxtimes_power_eta(double t) {
    if (!(t >= 1.0)) throw std::domain_error("MP multiplicative power needs t >= 1");
    EtaMap out;
    out.positive_support = true;
    out.descriptor = "mp^boxtimes" + std::to_string(t);
    out.eta = [t](cplx z) -> cplx {
        // solve u (1+u)^{-(1+t)} = z by Newton continued along the ray s*z
        auto val = [t](cplx u) { return u * principal_pow(1.0 + u, -(1.0 + t)); };
        auto newton = [&](cplx target, cplx u) -> std::pair<cplx, bool> {
            for (int it = 0; it < 80; ++it) {
                cplx f = val(u) - target;
                if (std::abs(f) <= 1e-15 * (1.0 + std::abs(target))) return {u, true};
                cplx d = principal_pow(1.0 + u, -(2.0 + t)) * (1.0 - t * u);
                if (std::abs(d) < 1e-300) return {u, false};
                cplx step = -f / d;
                cplx un = u + step;
                int halvings = 0;
                while (halvings < 30 && (std::abs(1.0 + un) < 1e-14 ||
                                         std::abs(val(un) - target) > std::abs(f))) {
                    step *= 0.5;
                    un = u + step;
                    ++halvings;
                }
                u = un;
            }
            return {u, std::abs(val(u) - cplx(target)) <= 1e-11 * (1.0 + std::abs(target))};
        };
        double s = std::min(1.0, 0.05 / (1.0 + std::abs(z)));
        cplx u = s * z;  // u ~ z near the origin
        while (true) {
            auto [un, ok] = newton(s * z, u);
            if (!ok) throw std::runtime_error("MP power inversion failed");
            u = un;
            if (s >= 1.0) break;
            s = std::min(1.0, 1.9 * s);
        }
        return u / (1.0 + u);
    };
    return out;
}

MultiplicativePower multiplicative_power_positive(const Measure& nu, double t) {
    PowerEvaluator pe{nu, PowerEvaluator::Kind::FreeMultiplicative, t};
    pe.require_valid();
    const auto* p = nu.parametric();
    MultiplicativePower out;
    if (p->law == Law::MarchenkoPastur) {
        out.s_transform = [t](double u) { return principal_pow(cplx(1.0 + u, 0.0), -t); };
        out.eta = mp_boxtimes_power_eta(t);
        return out;
    }
    StableParams powered = positive_stable_boxtimes_power(p->stable, t);
    Measure m = (p->law == Law::BooleanStable)
                    ? Measure::boolean_stable(powered.alpha, powered.rho, powered.scale)
                    : Measure::free_stable(powered.alpha, powered.rho, powered.scale);
    out.measure = m;
    StableParams sp = powered;
    sp.family = (p->law == Law::BooleanStable) ? StableParams::Family::Boolean : StableParams::Family::Free;
    out.s_transform = [sp](double u) { return stable_s_closed_form(sp, u); };
    out.eta = eta_map(m);
    return out;
}

}  // namespace freeconv
