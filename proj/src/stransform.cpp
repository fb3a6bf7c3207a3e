#include "freeconv/stransform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freeconv {

namespace {

constexpr double kZeroThreshold = 1e-6;  // |T| below this counts as the zero set

TSample sample_at(const FMap& fm, double u, double tol, cplx& warm) {
    if (!(u > -1.0 && u < 0.0)) throw std::domain_error("T-transform argument outside (-1,0)");
    double t = -1.0 / u;
    TSample s;
    s.u = u;
    auto [sig, rep] = sigma_point(fm, t, cplx(0.0, 0.0), tol, warm);
    if (rep.status == SolveStatus::Converged && sig.imag() < 0.0) warm = sig;
    s.report = rep;
    s.T = u * sig / (1.0 + u);
    // values live in the closed upper half-plane; clip roundoff leakage
    if (s.T.imag() < 0.0 && s.T.imag() > -1e-12 * (1.0 + std::abs(s.T))) s.T = cplx(s.T.real(), 0.0);
    bool in_zero_set = u <= fm.mass_at_zero - 1.0 + 1e-12;
    s.s_defined = !in_zero_set && std::abs(s.T) > kZeroThreshold;
    if (s.s_defined) s.S = 1.0 / s.T;
    return s;
}

}  // namespace

std::vector<TSample> t_transform(const FMap& fm, std::span<const double> u_grid, double tol) {
    std::vector<TSample> out;
    out.reserve(u_grid.size());
    cplx warm(0.0, -1.0);
    for (double u : u_grid) out.push_back(sample_at(fm, u, tol, warm));
    return out;
}

std::vector<TSample> t_transform(const Measure& mu, std::span<const double> u_grid, double tol) {
    if (mu.is_point_mass_at_zero()) {
        std::vector<TSample> out;
        for (double u : u_grid) {
            TSample s;
            s.u = u;
            s.T = 0.0;
            s.report.status = SolveStatus::Converged;
            out.push_back(s);
        }
        return out;
    }
    return t_transform(f_map(mu), u_grid, tol);
}

std::vector<TSample> s_transform(const Measure& mu, std::span<const double> u_grid, double tol) {
    if (mu.is_point_mass_at_zero()) throw std::domain_error("S-transform needs mu != delta_0");
    double lo = mu.mass_at_zero() - 1.0;
    for (double u : u_grid)
        if (!(u > lo && u < 0.0)) throw std::domain_error("S-transform argument outside the domain");
    auto samples = t_transform(mu, u_grid, tol);
    for (auto& s : samples)
        if (!s.s_defined) throw std::domain_error("grid touches the zero set of T");
    return samples;
}

double inversion_identity_residual(const Measure& mu, const TSample& sample, const EpsSchedule& schedule) {
    if (!sample.s_defined) throw std::domain_error("sample carries no S value");
    cplx p = (sample.u / (1.0 + sample.u)) * sample.S;
    CauchyFn g = cauchy_evaluator(mu);
    auto psi = [&](cplx z) { return g(1.0 / z) / z - 1.0; };
    cplx value;
    if (std::abs(p.imag()) > 1e-12 * (1.0 + std::abs(p))) {
        value = psi(p.imag() > 0.0 ? p : std::conj(p));
        if (p.imag() < 0.0) value = std::conj(value);
    } else {
        // nontangential limit from H+ along the eps-schedule, extrapolated
        double x = p.real();
        std::vector<cplx> vals(schedule.count);
        for (int k = 0; k < schedule.count; ++k) vals[k] = psi(cplx(x, schedule.eps(k)));
        cplx r_prev = (vals[1] - schedule.factor * vals[0]) / (1.0 - schedule.factor);
        cplx best = r_prev;
        double best_gap = std::numeric_limits<double>::infinity();
        for (int k = 1; k + 1 < schedule.count; ++k) {
            cplx r = (vals[k + 1] - schedule.factor * vals[k]) / (1.0 - schedule.factor);
            double gap = std::abs(r - r_prev);
            if (gap < best_gap) { best_gap = gap; best = r; }
            r_prev = r;
        }
        value = best;
    }
    return std::abs(value - sample.u);
}

MultiplicativityReport verify_multiplicativity(const Measure& mu, const Measure& nu,
                                               std::span<const double> u_grid, double tol) {
    if (!nu.positive_support()) throw std::domain_error("second factor must be supported on [0,+inf)");
    MultiplicativityReport rep;
    rep.u.assign(u_grid.begin(), u_grid.end());

    double conv_mass0 = std::max(mu.mass_at_zero(), nu.mass_at_zero());
    FMap f_conv = f_map_from_eta(convolution_eta(mu, nu, tol), conv_mass0);
    auto t_conv = t_transform(f_conv, u_grid, tol);
    auto t_mu = t_transform(mu, u_grid, tol);
    auto t_nu = t_transform(nu, u_grid, tol);

    rep.t_convolution.reserve(u_grid.size());
    rep.t_product.reserve(u_grid.size());
    for (size_t i = 0; i < u_grid.size(); ++i) {
        cplx a = t_conv[i].T;
        cplx b = t_mu[i].T * t_nu[i].T;
        rep.t_convolution.push_back(a);
        rep.t_product.push_back(b);
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(a - b));
    }
    return rep;
}

ClassifyResult classify_samples(const std::vector<TSample>& samples, double tol) {
    auto on_ray = [&](double rho) {
        cplx rot = std::polar(1.0, -(1.0 - rho) * kPi);
        for (const auto& s : samples) {
            cplx v = rot * s.T;
            double scale = 1.0 + std::abs(s.T);
            if (std::abs(v.imag()) > tol * scale) return false;
            if (v.real() < -tol * scale) return false;
        }
        return true;
    };
    if (on_ray(1.0)) return {MeasureClass::PositiveSupport, 1.0};
    if (on_ray(0.5)) return {MeasureClass::Symmetric, 0.5};
    std::vector<double> args;
    for (const auto& s : samples)
        if (std::abs(s.T) > kZeroThreshold) args.push_back(arg_ccw(s.T));
    if (args.empty()) return {MeasureClass::None, 0.0};
    std::nth_element(args.begin(), args.begin() + args.size() / 2, args.end());
    double theta = args[args.size() / 2];
    double rho = 1.0 - theta / kPi;
    if (rho > 0.0 && rho < 1.0 && on_ray(rho)) return {MeasureClass::BooleanMixture, rho};
    return {MeasureClass::None, 0.0};
}

ClassifyResult classify(const Measure& mu, std::span<const double> u_grid, double tol) {
    if (!mu.nondegenerate()) throw std::domain_error("classification needs a nondegenerate measure");
    return classify_samples(t_transform(mu, u_grid), tol);
}

}  // namespace freeconv
