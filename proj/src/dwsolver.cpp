#include "freeconv/dwsolver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "freeconv/parallel.hpp"

namespace freeconv {

bool SelfMap::maps_into_closure(int samples, unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(-3.0, 3.0), ang(0.05, kPi - 0.05);
    for (int i = 0; i < samples; ++i) {
        double r = std::pow(10.0, mag(rng));
        cplx w;
        switch (domain) {
            case Domain::UpperHalfPlane: w = std::polar(r, ang(rng)); break;
            case Domain::LowerHalfPlane: w = std::polar(r, -ang(rng)); break;
            case Domain::SlitPlane: w = std::polar(r, ang(rng) + kPi / 2); break;
        }
        cplx v = evaluator(w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        if (!in_closure(v, domain)) {
            // tolerate roundoff-level leakage
            if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v))) return false;
        }
    }
    return true;
}

namespace {

constexpr double kHuge = 1e100;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

struct Best {
    cplx w;
    double r = std::numeric_limits<double>::infinity();
    int iter = 0;
};

}  // namespace

std::pair<cplx, ConvergenceReport> dw_point(const SelfMap& map, cplx w0, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!in_domain(w0, map.domain)) throw std::domain_error("starting point outside the map's domain");

    ConvergenceReport rep;
    rep.tolerance = tol;

    cplx w = w0;
    Best best{w0};
    double r_window = std::numeric_limits<double>::infinity();  // residual 8 steps ago
    int window_mark = 0;
    bool stall = false;
    long long stride = 8;

    auto finish = [&](cplx wf, double rf, SolveStatus st) {
        rep.residual = rf;
        rep.status = st;
        rep.boundary_flag = rep.boundary_flag || std::abs(wf.imag()) <= 1e-6;
        return std::make_pair(wf, rep);
    };

    int it = 0;
    while (it < max_iter) {
        cplx fw = map.evaluator(w);
        ++it;
        rep.iterations = it;
        if (!finite(fw) || std::abs(fw) > kHuge)
            return finish(fw, std::numeric_limits<double>::infinity(), SolveStatus::Diverged);
        double r = std::abs(fw - w);
        if (r < best.r) { best = {w, r, it}; }
        if (r <= tol) return finish(w, r, SolveStatus::Converged);

        // rounding floor: residual stopped improving at a negligible level
        if (it - best.iter > 256 && best.r <= 1e-10 * (1.0 + std::abs(best.w))) {
            rep.tolerance = std::max(tol, best.r);
            return finish(best.w, best.r, SolveStatus::Converged);
        }

        // stall detection for boundary (parabolic) points
        if (!stall && it >= 1000 && it - window_mark >= 8) {
            if (r > r_window * std::pow(0.999, double(it - window_mark))) {
                stall = true;
                rep.boundary_flag = true;
            }
            r_window = r;
            window_mark = it;
        } else if (it - window_mark >= 8) {
            r_window = r;
            window_mark = it;
        }

        if (!stall && it % 8 == 0) {
            // guarded Steffensen step from (w, fw, f(fw))
            cplx f2 = map.evaluator(fw);
            ++it;
            if (finite(f2)) {
                cplx den = f2 - 2.0 * fw + w;
                if (std::abs(den) > 1e-300) {
                    cplx cand = w - (fw - w) * (fw - w) / den;
                    if (in_domain(cand, map.domain)) {
                        cplx fc = map.evaluator(cand);
                        ++it;
                        double rc = std::abs(fc - cand);
                        if (finite(fc) && rc < r) {
                            w = cand;
                            rep.accelerated = true;
                            continue;
                        }
                    }
                }
            }
            w = fw;
            continue;
        }

        if (stall) {
            // strided extrapolation: Aitken on (w, f^s(w), f^2s(w)), closure-clamped
            cplx w1 = fw;
            for (long long k = 1; k < stride && it < max_iter; ++k) { w1 = map.evaluator(w1); ++it; }
            cplx w2 = w1;
            for (long long k = 0; k < stride && it < max_iter; ++k) { w2 = map.evaluator(w2); ++it; }
            rep.iterations = it;
            if (!finite(w1) || !finite(w2) || std::abs(w2) > kHuge)
                return finish(w2, std::numeric_limits<double>::infinity(), SolveStatus::Diverged);
            cplx den = w2 - 2.0 * w1 + w;
            bool took_extrap = false;
            if (std::abs(den) > 1e-300) {
                cplx cand = clamp_to_closure(w - (w1 - w) * (w1 - w) / den, map.domain);
                cplx fc = map.evaluator(cand);
                ++it;
                double rc = std::abs(fc - cand);
                double r2 = std::abs(map.evaluator(w2) - w2);
                ++it;
                if (finite(fc) && rc <= r2) {
                    w = cand;
                    rep.accelerated = true;
                    took_extrap = true;
                    if (rc <= tol) return finish(w, rc, SolveStatus::Converged);
                    if (rc < best.r) best = {w, rc, it};
                } else {
                    w = w2;
                }
            } else {
                w = w2;
            }
            if (!took_extrap) stride = std::min<long long>(stride * 2, 4096);
            continue;
        }

        w = fw;
    }
    rep.iterations = max_iter;
    rep.residual = best.r;
    rep.boundary_flag = rep.boundary_flag || std::abs(best.w.imag()) <= 1e-6;
    rep.status = SolveStatus::MaxIter;
    return {best.w, rep};
}

std::vector<GridSolveResult> dw_point_grid(const std::function<cplx(cplx, cplx)>& family, Domain domain,
                                           const std::vector<cplx>& z_grid, cplx w0, double tol, int max_iter,
                                           bool serial, std::size_t chunk) {
    std::vector<GridSolveResult> out(z_grid.size());
    chunked_for(z_grid.size(), chunk, [&](std::size_t begin, std::size_t end) {
        cplx warm = w0;
        bool have_warm = false;
        for (std::size_t i = begin; i < end; ++i) {
            cplx z = z_grid[i];
            SelfMap map{[&family, z](cplx w) { return family(z, w); }, domain, {}};
            cplx start = (have_warm && in_domain(warm, domain)) ? warm : w0;
            auto [w, rep] = dw_point(map, start, tol, max_iter);
            out[i] = {w, rep};
            if (rep.status == SolveStatus::Converged) {
                warm = w;
                have_warm = true;
            }
        }
    }, serial);
    return out;
}

}  // namespace freeconv
