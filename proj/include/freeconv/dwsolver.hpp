#pragma once

#include <functional>
#include <string>
#include <vector>

#include "freeconv/complexdomain.hpp"

namespace freeconv {

// An analytic self-map of the tagged domain.
struct SelfMap {
    std::function<cplx(cplx)> evaluator;
    Domain domain = Domain::UpperHalfPlane;
    std::string descriptor;

    // Samples random interior points and checks the image stays in the
    // closure; cheap sanity net for hand-built maps.
    bool maps_into_closure(int samples = 32, unsigned seed = 1) const;
};

enum class SolveStatus { Converged, MaxIter, Diverged };

struct ConvergenceReport {
    int iterations = 0;
    double residual = 0.0;       // |f(w) - w| at the returned point
    double tolerance = 0.0;      // the tolerance the residual was held to
    bool accelerated = false;    // an extrapolation step was accepted
    bool boundary_flag = false;  // returned point within 1e-6 of the real axis,
                                 // or boundary extrapolation was engaged
    SolveStatus status = SolveStatus::MaxIter;
};

inline constexpr int kDwDefaultMaxIter = 100000;

// Denjoy-Wolff point by Picard iteration with guarded Steffensen acceleration
// (attempted every 8 steps, accepted only when the residual strictly drops and
// the iterate stays inside the domain). Slow boundary convergence switches to
// strided extrapolation on the iterate tail and raises boundary_flag.
// Divergence to infinity is reported as status Diverged.
std::pair<cplx, ConvergenceReport> dw_point(const SelfMap& map, cplx w0, double tol = 1e-12,
                                            int max_iter = kDwDefaultMaxIter);

// z-parametrized family evaluated over a path-ordered grid; each solve
// warm-starts from the previous Denjoy-Wolff point. Chunks of the grid run in
// parallel, each chunk cold-starting its first point.
struct GridSolveResult {
    cplx value;
    ConvergenceReport report;
};

std::vector<GridSolveResult> dw_point_grid(const std::function<cplx(cplx, cplx)>& family, Domain domain,
                                           const std::vector<cplx>& z_grid, cplx w0, double tol = 1e-12,
                                           int max_iter = kDwDefaultMaxIter, bool serial = false,
                                           std::size_t chunk = 64);

}  // namespace freeconv
