// Command-line front door: parse measure literals, run the transform engines,
// emit plot-ready CSV files and plain-text reports.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "freeconv/csvio.hpp"
#include "freeconv/measureparse.hpp"
#include "freeconv/parallel.hpp"
#include "freeconv/powers.hpp"
#include "freeconv/rmt.hpp"
#include "freeconv/stable.hpp"
#include "freeconv/stransform.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/twopoint.hpp"
#include "freeconv/verify.hpp"

using namespace freeconv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

void print_atoms(const ConvolutionMeasure& cm, std::ostream& os) {
    if (cm.atom_at_zero > 0.0)
        os << "{\"position\": 0, \"mass\": " << format_double(cm.atom_at_zero) << "}\n";
    for (auto [x, m] : cm.atoms)
        os << "{\"position\": " << format_double(x) << ", \"mass\": " << format_double(m) << "}\n";
}

struct ConvolveArgs {
    std::string mu, nu, out = "density.csv", atoms_out;
    double xmin = -10.0, xmax = 10.0;
    int n = 2000;
    double tol = 1e-12;
    double exclude_origin = -1.0;
    bool include_origin = false;
    bool serial = false;
    double max_bad_fraction = 0.2;
};

int run_convolve(const ConvolveArgs& a) {
    Measure mu = parse_measure(a.mu);
    Measure nu = parse_measure(a.nu);
    auto grid = uniform_grid(a.xmin, a.xmax, a.n);
    ConvolveOptions opt;
    opt.tol = a.tol;
    opt.origin_exclusion = a.exclude_origin;
    opt.include_origin = a.include_origin;
    opt.serial = a.serial;
    auto cm = convolve(mu, nu, grid, opt);
    emit_csv(cm.density_table, a.out);
    if (!a.atoms_out.empty()) {
        std::ostringstream os;
        print_atoms(cm, os);
        CsvTable raw;  // reuse the atomic writer for the report file
        raw.header = {"position", "mass"};
        if (cm.atom_at_zero > 0) raw.rows.push_back({0.0, cm.atom_at_zero});
        for (auto [x, m] : cm.atoms) raw.rows.push_back({x, m});
        write_csv(raw, a.atoms_out);
    }
    print_atoms(cm, std::cout);
    std::cout << "density written to " << a.out << " (" << cm.density_points.size() << " points, mass "
              << cm.total_mass() << ")\n";
    size_t bad = 0;
    for (const auto& p : cm.density_points)
        if (p.unreliable) ++bad;
    if (double(bad) > a.max_bad_fraction * double(cm.density_points.size())) return kExitNumeric;
    return kExitOk;
}

struct StransformArgs {
    std::string measure, out = "stransform.csv";
    double umin = -1.0 + 1e-3, umax = -1e-3;
    int n = 200;
    double tol = 1e-13;
    double max_bad_fraction = 0.2;
};

int run_stransform(const StransformArgs& a) {
    Measure m = parse_measure(a.measure);
    auto grid = chebyshev_grid(a.n, a.umin, a.umax);
    auto samples = t_transform(m, grid, a.tol);
    CsvTable t;
    t.header = {"u", "T_re", "T_im", "S_re", "S_im", "status"};
    size_t bad = 0;
    for (const auto& s : samples) {
        double status = 0.0;
        if (s.report.status != SolveStatus::Converged) {
            status = 2.0;
            ++bad;
        } else if (s.report.boundary_flag) {
            status = 1.0;
        }
        t.rows.push_back({s.u, s.T.real(), s.T.imag(), s.s_defined ? s.S.real() : 0.0,
                          s.s_defined ? s.S.imag() : 0.0, status});
    }
    write_csv(t, a.out);
    std::cout << "transform table written to " << a.out << "\n";
    if (double(bad) > a.max_bad_fraction * double(samples.size())) return kExitNumeric;
    return kExitOk;
}

struct PowerArgs {
    std::string measure, kind = "boxplus", out = "power.csv";
    double t = 2.0;
    double xmin = -10.0, xmax = 10.0;
    int n = 1000;
};

int run_power(const PowerArgs& a) {
    Measure base = parse_measure(a.measure);
    auto grid = uniform_grid(a.xmin, a.xmax, a.n);
    if (a.kind == "uplus") {
        Measure out = boolean_power(base, a.t, grid);
        if (out.is_atomic() || out.parametric()) {
            std::cout << serialize_measure(out) << "\n";
            return kExitOk;
        }
        const auto& g = std::get<GridDensityMeasure>(out.repr());
        CsvTable t;
        t.header = {"x", "density"};
        for (size_t i = 0; i < g.grid.size(); ++i) t.rows.push_back({g.grid[i], g.density[i]});
        write_csv(t, a.out);
        if (g.atom_at_zero > 0)
            std::cout << "{\"position\": 0, \"mass\": " << format_double(g.atom_at_zero) << "}\n";
        for (auto [x, m] : g.atoms)
            std::cout << "{\"position\": " << format_double(x) << ", \"mass\": " << format_double(m)
                      << "}\n";
        std::cout << "density written to " << a.out << "\n";
        return kExitOk;
    }
    if (a.kind == "boxplus") {
        PowerEvaluator pe{base, PowerEvaluator::Kind::FreeAdditive, a.t};
        pe.require_valid();
        EtaMap em = free_additive_power_eta(base, a.t);
        CauchyFn g = cauchy_from_eta(em);
        auto pts = stieltjes_invert_density(g, grid);
        CsvTable t;
        t.header = {"x", "density"};
        for (const auto& p : pts) t.rows.push_back({p.x, p.value});
        write_csv(t, a.out);
        std::cout << "density written to " << a.out << "\n";
        return kExitOk;
    }
    if (a.kind == "boxtimes") {
        auto mp = multiplicative_power_positive(base, a.t);
        if (mp.measure) {
            std::cout << serialize_measure(*mp.measure) << "\n";
            return kExitOk;
        }
        CsvTable t;  // S-transform object only
        t.header = {"u", "S_re", "S_im"};
        for (double u : chebyshev_grid(a.n > 0 ? a.n : 200)) {
            cplx s = mp.s_transform(u);
            t.rows.push_back({u, s.real(), s.imag()});
        }
        write_csv(t, a.out);
        std::cout << "S-transform table written to " << a.out << "\n";
        return kExitOk;
    }
    throw CLI::ValidationError("--kind must be boxplus, uplus or boxtimes");
}

struct StableArgs {
    double alpha = 0.5, rho = 0.5;
    std::string family = "free", out = "stable_density.csv";
    double xmin = -5.0, xmax = 5.0;
    int n = 800;
    std::string identity;
    IdentityParams params;
};

int run_stable_density(const StableArgs& a) {
    StableParams p{a.alpha, a.rho,
                   a.family == "boolean" ? StableParams::Family::Boolean : StableParams::Family::Free,
                   1.0};
    if (!p.admissible()) throw CLI::ValidationError("parameters outside the admissible set");
    CsvTable t;
    t.header = {"x", "density"};
    for (double x : uniform_grid(a.xmin, a.xmax, a.n)) {
        if (x == 0.0) continue;
        double d = (p.family == StableParams::Family::Boolean) ? boolean_stable_density(p, x)
                                                               : free_stable_density(p, x);
        t.rows.push_back({x, d});
    }
    write_csv(t, a.out);
    std::cout << "density written to " << a.out << "\n";
    return kExitOk;
}

int print_identity_report(const IdentityReport& rep) {
    std::cout << "identity " << rep.name << "\n";
    for (const auto& line : rep.lines) std::cout << "  " << line << "\n";
    std::cout << "  max deviation " << rep.max_deviation << " (tolerance " << rep.tolerance << ")\n"
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitNumeric;
}

struct TwopointArgs {
    int example = 1;
    double lmu = 0.5, lnu = 0.5, amu = -3.0, anu = 3.0;
    bool custom = false;
    double xmin = -10.0, xmax = 10.0;
    int n = 2000;
    double eps = 1e-6;
    std::string out = "twopoint_density.csv";
};

int run_twopoint(const TwopointArgs& a) {
    TwoPointPair pair;
    if (a.custom) {
        pair = {a.lmu, a.lnu, a.amu, a.anu};
    } else if (a.example == 1) {
        pair = {0.5, 0.5, -3.0, 3.0};
    } else if (a.example == 2) {
        pair = {1.0 / 3.0, 0.5, -2.0, 0.0};
    } else {
        throw CLI::ValidationError("--example must be 1 or 2");
    }
    TwoPointClosedForm cf(pair);
    CsvTable t;
    t.header = {"x", "density"};
    for (double x : uniform_grid(a.xmin, a.xmax, a.n)) t.rows.push_back({x, cf.density(x, a.eps)});
    write_csv(t, a.out);
    std::cout << "closed-form density written to " << a.out << "\n";
    auto bp = cf.real_branch_points();
    std::cout << "branch points:";
    for (double b : bp) std::cout << " " << b;
    std::cout << "\n";
    return kExitOk;
}

struct RmtArgs {
    std::string model = "fig1", mu, nu, out = "rmt";
    int n = 512;
    int seeds = 8;
    std::uint64_t seed0 = 1;
    double exclusion = 0.05;
    int grid_n = 1200;
};

int run_rmt(const RmtArgs& a) {
    Measure mu = Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}});
    Measure nu = Measure::atomic({{1.0, 0.5}, {3.0, 0.5}});
    double xmin = -10.0, xmax = 10.0;
    if (a.model == "fig2") {
        mu = Measure::atomic({{-2.0, 2.0 / 3.0}, {1.0, 1.0 / 3.0}});
        nu = Measure::atomic({{0.0, 0.5}, {1.0, 0.5}});
        xmin = -3.0;
        xmax = 2.0;
    } else if (a.model == "custom") {
        if (a.mu.empty() || a.nu.empty())
            throw CLI::ValidationError("custom model needs --mu and --nu");
        mu = parse_measure(a.mu);
        nu = parse_measure(a.nu);
        double lo = 0.0, hi = 0.0;
        for (auto [x, w] : mu.point_masses())
            for (auto [y, v] : nu.point_masses()) {
                lo = std::min(lo, x * y);
                hi = std::max(hi, x * y);
            }
        xmin = lo - 1.0;
        xmax = hi + 1.0;
    } else if (a.model != "fig1") {
        throw CLI::ValidationError("--model must be fig1, fig2 or custom");
    }

    // two-pass prediction: locate the support edges on a base grid, then
    // refine around them so the trapezoid CDF carries the full spike mass
    std::vector<double> marks;
    auto predicted = convolve_refined(mu, nu, xmin, xmax, a.grid_n, {}, &marks);

    // predicted density for plotting, excluding a neighborhood of the spikes
    {
        CsvTable t;
        t.header = {"x", "density"};
        for (const auto& p : predicted.density_points) {
            bool near_singular = false;
            for (double m : marks)
                if (std::abs(p.x - m) < a.exclusion) near_singular = true;
            if (!near_singular) t.rows.push_back({p.x, p.value});
        }
        write_csv(t, a.out + "_density.csv");
    }

    std::vector<SpectrumSample> samples(a.seeds);
    chunked_for(std::size_t(a.seeds), 1, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) samples[k] = sample_spectrum(mu, nu, a.n, a.seed0 + k);
    });
    CsvTable summary;
    summary.header = {"n", "seed", "ks"};
    double mean_ks = 0.0;
    for (int k = 0; k < a.seeds; ++k) {
        double ks = ks_distance(samples[std::size_t(k)], predicted);
        CsvTable t;
        t.header = {"eigenvalue"};
        for (double ev : samples[std::size_t(k)].eigenvalues) t.rows.push_back({ev});
        write_csv(t, a.out + "_seed" + std::to_string(a.seed0 + std::uint64_t(k)) + ".csv");
        summary.rows.push_back({double(a.n), double(a.seed0 + std::uint64_t(k)), ks});
        mean_ks += ks;
    }
    write_csv(summary, a.out + "_summary.csv");
    std::cout << "mean KS distance over " << a.seeds << " seeds: " << mean_ks / a.seeds << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"free multiplicative convolution engine"};
    app.set_config("--config", "", "key = value configuration mirroring the flags");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: FREECONV_THREADS or all cores)");

    ConvolveArgs ca;
    auto* conv = app.add_subcommand("convolve", "density and atoms of mu boxtimes nu");
    conv->add_option("--mu", ca.mu, "measure literal for the real factor")->required();
    conv->add_option("--nu", ca.nu, "measure literal for the positive factor")->required();
    conv->add_option("--xmin", ca.xmin);
    conv->add_option("--xmax", ca.xmax);
    conv->add_option("--n", ca.n, "grid points");
    conv->add_option("--out", ca.out);
    conv->add_option("--atoms-out", ca.atoms_out);
    conv->add_option("--tol", ca.tol);
    conv->add_option("--exclude-origin", ca.exclude_origin, "radius dropped around 0 (negative: auto)");
    conv->add_flag("--include-origin", ca.include_origin);
    conv->add_flag("--serial", ca.serial, "single warm-started chunk (reference path)");
    conv->add_option("--max-bad-fraction", ca.max_bad_fraction);

    StransformArgs sa;
    auto* st = app.add_subcommand("stransform", "T and S transforms on a u grid");
    st->add_option("--measure", sa.measure)->required();
    st->add_option("--umin", sa.umin);
    st->add_option("--umax", sa.umax);
    st->add_option("--n", sa.n);
    st->add_option("--out", sa.out);
    st->add_option("--tol", sa.tol);

    PowerArgs pa;
    auto* pw = app.add_subcommand("power", "convolution powers of a measure");
    pw->add_option("--measure", pa.measure)->required();
    pw->add_option("--kind", pa.kind, "boxplus | uplus | boxtimes");
    pw->add_option("--t", pa.t)->required();
    pw->add_option("--xmin", pa.xmin);
    pw->add_option("--xmax", pa.xmax);
    pw->add_option("--n", pa.n);
    pw->add_option("--out", pa.out);

    StableArgs sta;
    auto* stab = app.add_subcommand("stable", "stable-law densities and identity reports");
    auto* dens = stab->add_subcommand("density", "density table of a stable law");
    dens->add_option("--alpha", sta.alpha)->required();
    dens->add_option("--rho", sta.rho)->required();
    dens->add_option("--family", sta.family, "free | boolean");
    dens->add_option("--xmin", sta.xmin);
    dens->add_option("--xmax", sta.xmax);
    dens->add_option("--n", sta.n);
    dens->add_option("--out", sta.out);
    auto* ident = stab->add_subcommand("identity", "verify a stable-law identity by name");
    ident->add_option("--name", sta.identity)->required();
    ident->add_option("--alpha", sta.params.alpha);
    ident->add_option("--beta", sta.params.beta);
    ident->add_option("--rho", sta.params.rho);
    ident->add_option("--c", sta.params.c);
    stab->require_subcommand(1);

    TwopointArgs ta;
    auto* tp = app.add_subcommand("twopoint", "closed-form two-atom convolution curves");
    tp->add_option("--example", ta.example, "1 or 2");
    auto* lmu = tp->add_option("--lmu", ta.lmu);
    tp->add_option("--lnu", ta.lnu);
    tp->add_option("--amu", ta.amu);
    tp->add_option("--anu", ta.anu);
    tp->add_option("--xmin", ta.xmin);
    tp->add_option("--xmax", ta.xmax);
    tp->add_option("--n", ta.n);
    tp->add_option("--eps", ta.eps, "imaginary offset for the boundary curve");
    tp->add_option("--out", ta.out);

    RmtArgs ra;
    auto* rm = app.add_subcommand("rmt", "random-matrix spectra against the computed law");
    rm->add_option("--model", ra.model, "fig1 | fig2 | custom");
    rm->add_option("--mu", ra.mu);
    rm->add_option("--nu", ra.nu);
    rm->add_option("--n", ra.n, "matrix size");
    rm->add_option("--seeds", ra.seeds, "number of seeds");
    rm->add_option("--seed0", ra.seed0, "first seed");
    rm->add_option("--out", ra.out, "output path prefix");
    rm->add_option("--exclusion", ra.exclusion, "radius excluded around density singularities");
    rm->add_option("--grid-n", ra.grid_n, "prediction grid size");

    IdentityParams vp;
    std::string vident;
    auto* vf = app.add_subcommand("verify", "run a named identity suite");
    vf->add_option("--identity", vident, "thm1.6 thm1.7 thm1.4 eq:BN eq:BN_free prop6.3 cor6.1")
        ->required();
    vf->add_option("--alpha", vp.alpha);
    vf->add_option("--beta", vp.beta);
    vf->add_option("--rho", vp.rho);
    vf->add_option("--c", vp.c);
    vf->add_option("--t", vp.t);

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    if (threads > 0) setenv("FREECONV_THREADS", std::to_string(threads).c_str(), 1);
    (void)lmu;
    ta.custom = lmu->count() > 0;

    try {
        if (conv->parsed()) return run_convolve(ca);
        if (st->parsed()) return run_stransform(sa);
        if (pw->parsed()) return run_power(pa);
        if (stab->parsed()) {
            if (dens->parsed()) return run_stable_density(sta);
            return print_identity_report(verify_identity(sta.identity, sta.params));
        }
        if (tp->parsed()) return run_twopoint(ta);
        if (rm->parsed()) return run_rmt(ra);
        if (vf->parsed()) return print_identity_report(verify_identity(vident, vp));
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitValidation;
}
