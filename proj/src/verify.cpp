#include "freeconv/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "freeconv/powers.hpp"
#include "freeconv/stable.hpp"
#include "freeconv/stransform.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

namespace {

std::vector<cplx> halfplane_grid(int n, unsigned seed = 1234) {
    std::vector<cplx> out;
    out.reserve(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.15, 2.5);
    for (int i = 0; i < n; ++i) out.emplace_back(re(rng), im(rng));
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

EtaMap dilated(const EtaMap& base, double s) {
    EtaMap out = base;
    out.eta = [base, s](cplx z) { return base(s * z); };
    return out;
}

IdentityReport reproducing_identity(const IdentityParams& p) {
    IdentityReport rep;
    rep.name = "thm1.6";
    rep.tolerance = 1e-6;
    double alpha = p.alpha, beta = p.beta, rho = p.rho;
    double bprime = alpha * beta / (1.0 - beta + alpha * beta);

    // closed-form S route on (-0.9, -0.1)
    double closed_dev = 0.0;
    for (double u = -0.9; u <= -0.1 + 1e-12; u += 0.8 / 49.0) {
        StableParams bl{alpha, rho, StableParams::Family::Boolean, 1.0};
        StableParams br{bprime, 1.0, StableParams::Family::Boolean, 1.0};
        StableParams bt{alpha * beta, rho, StableParams::Family::Boolean, 1.0};
        closed_dev = std::max(closed_dev, std::abs(stable_s_closed_form(bl, u) * stable_s_closed_form(br, u) -
                                                   stable_s_closed_form(bt, u)));
        StableParams fl{alpha, rho, StableParams::Family::Free, 1.0};
        StableParams fr{bprime, 1.0, StableParams::Family::Free, 1.0};
        StableParams ft{alpha * beta, rho, StableParams::Family::Free, 1.0};
        closed_dev = std::max(closed_dev, std::abs(stable_s_closed_form(fl, u) * stable_s_closed_form(fr, u) -
                                                   stable_s_closed_form(ft, u)));
    }
    rep.lines.push_back("closed-form S route: max deviation " + fmt(closed_dev) + " (tol 1e-10)");

    // numeric boxtimes route through the T-transform, both families
    auto grid = chebyshev_grid(25, -0.9, -0.1);
    double numeric_dev = 0.0;
    {
        Measure mu = Measure::boolean_stable(alpha, rho);
        Measure nu = Measure::boolean_stable(bprime, 1.0);
        FMap fc = f_map_from_eta(convolution_eta(mu, nu), 0.0);
        auto tc = t_transform(fc, grid);
        for (auto& s : tc) {
            StableParams bt{alpha * beta, rho, StableParams::Family::Boolean, 1.0};
            numeric_dev = std::max(numeric_dev, std::abs(s.T - stable_t_closed_form(bt, s.u)));
        }
    }
    {
        Measure mu = Measure::free_stable(alpha, rho);
        Measure nu = Measure::free_stable(bprime, 1.0);
        FMap fc = f_map_from_eta(convolution_eta(mu, nu), 0.0);
        auto tc = t_transform(fc, grid);
        for (auto& s : tc) {
            StableParams ft{alpha * beta, rho, StableParams::Family::Free, 1.0};
            numeric_dev = std::max(numeric_dev, std::abs(s.T - stable_t_closed_form(ft, s.u)));
        }
    }
    rep.lines.push_back("numeric boxtimes route: max deviation " + fmt(numeric_dev) + " (tol 1e-6)");
    rep.max_deviation = std::max(closed_dev, numeric_dev);
    rep.pass = closed_dev <= 1e-10 && numeric_dev <= 1e-6;
    return rep;
}

IdentityReport mixture_identity(const IdentityParams& p) {
    IdentityReport rep;
    rep.name = "thm1.7";
    rep.tolerance = 1e-6;
    StableParams bp{p.alpha, p.rho, StableParams::Family::Boolean, 1.0};
    Measure b = Measure::boolean_stable(p.alpha, p.rho);
    auto grid = halfplane_grid(50);

    // nu = delta_c: nu^{boxtimes 1/alpha} = delta_{c^{1/alpha}}
    double dev1 = 0.0;
    {
        EtaMap nu_eta = eta_map(Measure::point_mass(p.c));
        Measure nu_pow = Measure::point_mass(std::pow(p.c, 1.0 / p.alpha));
        EtaMap conv = convolution_eta(b, nu_pow);
        for (cplx z : grid) {
            cplx lhs = mixture_eta(bp, [&](cplx w) { return nu_eta(w); }, z);
            dev1 = std::max(dev1, std::abs(lhs - conv(z)));
        }
    }
    rep.lines.push_back("nu = point mass: max deviation " + fmt(dev1));

    // nu = positive Boolean stable: nu^{boxtimes 1/alpha} reparametrizes
    double dev2 = 0.0;
    {
        Measure nu = Measure::boolean_stable(p.beta, 1.0);
        EtaMap nu_eta = eta_map(nu);
        StableParams powered = positive_stable_boxtimes_power(nu.parametric()->stable, 1.0 / p.alpha);
        Measure nu_pow = Measure::boolean_stable(powered.alpha, 1.0, powered.scale);
        EtaMap conv = convolution_eta(b, nu_pow);
        for (cplx z : grid) {
            cplx lhs = mixture_eta(bp, [&](cplx w) { return nu_eta(w); }, z);
            dev2 = std::max(dev2, std::abs(lhs - conv(z)));
        }
    }
    rep.lines.push_back("nu = positive Boolean stable: max deviation " + fmt(dev2));
    rep.max_deviation = std::max(dev1, dev2);
    rep.pass = rep.max_deviation <= rep.tolerance;
    return rep;
}

IdentityReport homomorphism_identity(const IdentityParams&) {
    IdentityReport rep;
    rep.name = "thm1.4";
    rep.tolerance = 1e-6;
    Measure rho = Measure::atomic({{0.5, 0.4}, {2.0, 0.6}});
    Measure mu = Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}});
    Measure nu = Measure::atomic({{1.0, 0.5}, {3.0, 0.5}});
    EtaMap lhs = b_eta(eta_map(rho), convolution_eta(mu, nu));
    EtaMap rhs = convolution_eta(b_eta(rho, mu), b_eta(rho, nu));
    double dev = 0.0;
    for (cplx z : halfplane_grid(50)) dev = std::max(dev, std::abs(lhs(z) - rhs(z)));
    rep.lines.push_back("two-atom homomorphism: max deviation " + fmt(dev));
    rep.max_deviation = dev;
    rep.pass = dev <= rep.tolerance;
    return rep;
}

IdentityReport bn_identity(const IdentityParams& p) {
    IdentityReport rep;
    rep.name = "eq:BN";
    rep.tolerance = 1e-6;
    double t = p.t > 0 ? p.t : 1.0;
    Measure mu = Measure::atomic({{-2.0, 0.5}, {1.0, 0.5}});
    Measure sig = Measure::atomic({{0.0, t / (1.0 + t)}, {1.0 + t, 1.0 / (1.0 + t)}});
    EtaMap lhs = b_eta(sig, mu);
    EtaMap rhs = boolean_power_eta(free_additive_power_eta(mu, 1.0 + t), 1.0 / (1.0 + t));
    double dev = 0.0;
    for (cplx z : halfplane_grid(50)) dev = std::max(dev, std::abs(lhs(z) - rhs(z)));
    rep.lines.push_back("Belinschi-Nica composition at t = " + std::to_string(t) +
                        ": max deviation " + fmt(dev));
    rep.max_deviation = dev;
    rep.pass = dev <= rep.tolerance;
    return rep;
}

IdentityReport bn_free_identity(const IdentityParams&) {
    IdentityReport rep;
    rep.name = "eq:BN_free";
    rep.tolerance = 1e-6;
    Measure mu = Measure::atomic({{-3.0, 0.5}, {1.0, 0.5}});
    Measure nu = Measure::atomic({{1.0, 0.5}, {3.0, 0.5}});
    double dev = 0.0;
    for (double t : {1.5, 2.0, 3.0}) {
        EtaMap conv = convolution_eta(mu, nu);
        EtaMap lhs = dilated(free_additive_power_eta(f_map_from_eta(conv, 0.0), t, false), 1.0 / t);
        EtaMap mup = dilated(free_additive_power_eta(mu, t), 1.0 / t);
        EtaMap nup = dilated(free_additive_power_eta(nu, t), 1.0 / t);
        nup.positive_support = true;
        EtaMap rhs = convolution_eta(mup, nup);
        double dt = 0.0;
        for (cplx z : halfplane_grid(17, 99 + unsigned(t * 10))) dt = std::max(dt, std::abs(lhs(z) - rhs(z)));
        rep.lines.push_back("t = " + std::to_string(t) + ": max deviation " + fmt(dt));
        dev = std::max(dev, dt);
    }
    rep.max_deviation = dev;
    rep.pass = dev <= rep.tolerance;
    return rep;
}

IdentityReport mp_factorization_identity(const IdentityParams& p) {
    IdentityReport rep;
    rep.name = "prop6.3";
    rep.tolerance = 1e-6;
    double alpha = p.alpha, rho = p.rho;
    double t = (1.0 - alpha) / alpha;

    double closed_dev = 0.0;
    for (double u = -0.9; u <= -0.1 + 1e-12; u += 0.8 / 49.0) {
        StableParams b{alpha, rho, StableParams::Family::Boolean, 1.0};
        StableParams f{alpha, rho, StableParams::Family::Free, 1.0};
        cplx rhs = stable_s_closed_form(f, u) * principal_pow(cplx(1.0 + u, 0.0), -t);
        closed_dev = std::max(closed_dev, std::abs(stable_s_closed_form(b, u) - rhs));
    }
    rep.lines.push_back("closed-form S route: max deviation " + fmt(closed_dev) + " (tol 1e-10)");

    double numeric_dev = 0.0;
    if (t >= 1.0) {
        EtaMap conv = convolution_eta(eta_map(Measure::free_stable(alpha, rho)), mp_boxtimes_power_eta(t));
        EtaMap target = eta_map(Measure::boolean_stable(alpha, rho));
        for (cplx z : halfplane_grid(50)) numeric_dev = std::max(numeric_dev, std::abs(conv(z) - target(z)));
        rep.lines.push_back("numeric boxtimes route (alpha <= 1/2): max deviation " + fmt(numeric_dev));
    } else {
        rep.lines.push_back("numeric route skipped: the MP power exponent (1-alpha)/alpha is below 1");
    }
    rep.max_deviation = std::max(closed_dev, numeric_dev);
    rep.pass = closed_dev <= 1e-10 && numeric_dev <= 1e-6;
    return rep;
}

IdentityReport folklore_identity(const IdentityParams& p) {
    IdentityReport rep;
    rep.name = "cor6.1";
    rep.tolerance = 1e-6;
    // c_{a,b} boxtimes nu = c_{a,b} circled-ast nu: eta_nu((a+ib) z)
    double a = -std::cos(p.rho * kPi), b = std::sin(p.rho * kPi);
    Measure cauchy = Measure::cauchy(a, b);
    Measure nu = Measure::atomic({{0.5, 0.4}, {2.0, 0.6}});
    EtaMap nu_eta = eta_map(nu);
    EtaMap conv = convolution_eta(cauchy, nu);
    double dev = 0.0;
    for (cplx z : halfplane_grid(50)) {
        cplx lhs = nu_eta(cplx(a, b) * z);
        dev = std::max(dev, std::abs(lhs - conv(z)));
    }
    rep.lines.push_back("Cauchy factor a=" + std::to_string(a) + " b=" + std::to_string(b) +
                        ": max deviation " + fmt(dev));
    rep.max_deviation = dev;
    rep.pass = dev <= rep.tolerance;
    return rep;
}

}  // namespace

std::vector<std::string> known_identities() {
    return {"thm1.6", "thm1.7", "thm1.4", "eq:BN", "eq:BN_free", "prop6.3", "cor6.1"};
}

IdentityReport verify_identity(const std::string& name, const IdentityParams& params) {
    if (name == "thm1.6") return reproducing_identity(params);
    if (name == "thm1.7") return mixture_identity(params);
    if (name == "thm1.4") return homomorphism_identity(params);
    if (name == "eq:BN") return bn_identity(params);
    if (name == "eq:BN_free") return bn_free_identity(params);
    if (name == "prop6.3") return mp_factorization_identity(params);
    if (name == "cor6.1") return folklore_identity(params);
    throw std::invalid_argument("unknown identity: " + name);
}

}  // namespace freeconv
