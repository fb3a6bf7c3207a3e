#include "freeconv/stable.hpp"

#include <cmath>
#include <stdexcept>

namespace freeconv {

namespace {

void require_admissible(const StableParams& p) {
    if (!p.admissible()) throw std::domain_error("stable parameters outside the admissible set");
}

// e^{-i rho pi} as an exact-phase constant.
cplx phase_neg(double rho) { return std::polar(1.0, -rho * kPi); }
cplx phase_pos(double rho) { return std::polar(1.0, rho * kPi); }

// log |(alpha n)_{n-1} / n!| and its sign, with (x)_k the falling factorial.
std::pair<double, double> log_series_coeff(double alpha, int n) {
    double lg = -std::lgamma(double(n) + 1.0);
    double sign = 1.0;
    for (int j = 0; j <= n - 2; ++j) {
        double f = alpha * n - j;
        if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        lg += std::log(std::abs(f));
        if (f < 0.0) sign = -sign;
    }
    return {lg, sign};
}

}  // namespace

double free_stable_series_radius(double alpha) {
    if (alpha == 1.0) return 1.0;
    return alpha * std::pow(std::abs(1.0 - alpha), (1.0 - alpha) / alpha);
}

cplx free_stable_cauchy_series(const StableParams& p, cplx z, double term_floor) {
    require_admissible(p);
    z /= p.scale;
    // zeta = (e^{i rho pi} z)^{-alpha}; series in powers of -zeta.
    cplx base = phase_pos(p.rho) * z;
    if (base.imag() == 0.0 && base.real() <= 0.0) base += cplx(0.0, -1e-300);
    cplx zeta = principal_pow(base, -p.alpha);
    cplx sum = 1.0;
    cplx pw = 1.0;
    bool ok = false;
    // coefficients can pass near zero when alpha*n crosses an integer, so
    // require two consecutive sub-floor terms and sustained growth to give up
    int small_run = 0, grow_run = 0;
    double last_mag = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 400; ++n) {
        pw *= -zeta;
        auto [lg, sign] = log_series_coeff(p.alpha, n);
        cplx term = sign * std::exp(lg) * pw;
        double mag = std::abs(term);
        sum += term;
        small_run = (mag < term_floor * std::abs(sum)) ? small_run + 1 : 0;
        if (small_run >= 2) { ok = true; break; }
        grow_run = (mag > last_mag) ? grow_run + 1 : 0;
        if (n > 24 && grow_run >= 6) break;  // outside the convergence radius
        last_mag = std::max(mag, 1e-300);
    }
    if (!ok) throw std::runtime_error("free stable series did not converge");
    return sum / (z * p.scale);
}

cplx free_stable_implicit_residual(double alpha, double rho, cplx w, cplx g) {
    return w * g - 1.0 + principal_pow(phase_neg(rho) * g, alpha);
}

namespace {

// One damped-Newton solve of w*G - 1 = -(e^{-i rho pi} G)^alpha from g0.
bool newton_implicit(double alpha, double rho, cplx w, cplx& g, int iters = 60) {
    cplx ph = phase_neg(rho);
    double r_prev = std::abs(free_stable_implicit_residual(alpha, rho, w, g));
    for (int i = 0; i < iters; ++i) {
        cplx pg = ph * g;
        if (pg.imag() == 0.0 && pg.real() <= 0.0) { g += cplx(1e-14, 1e-14); pg = ph * g; }
        cplx res = w * g - 1.0 + principal_pow(pg, alpha);
        double r = std::abs(res);
        if (r < 1e-14 * (1.0 + std::abs(w * g))) return true;
        cplx dres = w + alpha * ph * principal_pow(pg, alpha - 1.0);
        if (std::abs(dres) < 1e-300) return false;
        cplx step = -res / dres;
        cplx gn = g + step;
        double rn = std::abs(free_stable_implicit_residual(alpha, rho, w, gn));
        int halvings = 0;
        while (rn > r && halvings < 25) {
            step *= 0.5;
            gn = g + step;
            rn = std::abs(free_stable_implicit_residual(alpha, rho, w, gn));
            ++halvings;
        }
        if (rn >= r && r < 1e-11 * (1.0 + std::abs(w * g))) { return true; }
        g = gn;
        r_prev = rn;
    }
    return r_prev < 1e-10;
}

// Vertical-descent continuation: start where the series converges, walk the
// imaginary part down to the target inside C-.
cplx descend_to(const StableParams& p, cplx target) {
    StableParams q = p;
    q.scale = 1.0;
    double radius = free_stable_series_radius(p.alpha);
    double top = std::max({2.5 * radius, 2.0 * std::abs(target.real()), 1.0});
    cplx z = cplx(target.real(), -top);
    cplx g = free_stable_cauchy_series(q, z);
    // geometric descent of |Im z| toward the target height
    double im_t = -target.imag();  // >= 0
    double im = top;
    while (im > std::max(im_t, 1e-300)) {
        im = std::max(im_t, im * 0.55);
        cplx zn = cplx(target.real(), -im);
        if (!newton_implicit(p.alpha, p.rho, zn, g)) {
            // restart closer with smaller strides
            im = std::min(top, im / 0.55 * 0.85);
            zn = cplx(target.real(), -im);
            if (!newton_implicit(p.alpha, p.rho, zn, g, 120))
                throw std::runtime_error("free stable continuation failed");
        }
        z = zn;
        if (im == im_t) break;
    }
    if (im_t == 0.0) {
        if (!newton_implicit(p.alpha, p.rho, cplx(target.real(), 0.0), g, 120))
            throw std::runtime_error("free stable boundary continuation failed");
    }
    return g;
}

cplx free_stable_cauchy_lower(const StableParams& p, cplx z_lower) {
    // boundary values are limits from C-
    if (z_lower.imag() == 0.0) z_lower = cplx(z_lower.real(), -1e-300);
    // closed forms at the family edges
    if (p.alpha == 2.0) {
        cplx z = z_lower / p.scale;
        return (z - sqrt_asym_linear(z, 4.0)) / (2.0 * p.scale);
    }
    if (p.alpha == 1.0) {
        if (p.rho == 1.0) return 1.0 / (z_lower - p.scale);
        if (p.rho == 0.0) return 1.0 / (z_lower + p.scale);
        cplx z = z_lower / p.scale;
        return 1.0 / (p.scale * (z + phase_neg(p.rho)));
    }
    StableParams q = p;
    q.scale = 1.0;
    cplx z = z_lower / p.scale;
    double radius = free_stable_series_radius(p.alpha);
    if (std::abs(z) >= 2.2 * radius) {
        try {
            return free_stable_cauchy_series(q, z) / p.scale;
        } catch (const std::runtime_error&) {
        }
    }
    return descend_to(q, z) / p.scale;
}

}  // namespace

cplx free_stable_cauchy(const StableParams& p, cplx z) {
    require_admissible(p);
    if (z.imag() > 0.0) return std::conj(free_stable_cauchy_lower(p, std::conj(z)));
    return free_stable_cauchy_lower(p, z);
}

FreeStableCauchy::FreeStableCauchy(const StableParams& p) : p_(p) { require_admissible(p); }

cplx FreeStableCauchy::operator()(cplx z) const {
    bool reflect = z.imag() > 0.0;
    cplx zl = reflect ? std::conj(z) : z;
    if (zl.imag() == 0.0) zl = cplx(zl.real(), -1e-300);
    if (p_.alpha == 1.0 || p_.alpha == 2.0) {
        cplx g = free_stable_cauchy_lower(p_, zl);
        return reflect ? std::conj(g) : g;
    }
    cplx zs = zl / p_.scale;
    if (have_prev_ && std::abs(zs - prev_z_) < 0.4 * (1e-3 + std::abs(prev_z_.imag()))) {
        cplx g = prev_g_;
        if (newton_implicit(p_.alpha, p_.rho, zs, g)) {
            prev_z_ = zs;
            prev_g_ = g;
            cplx out = g / p_.scale;
            return reflect ? std::conj(out) : out;
        }
    }
    cplx g = free_stable_cauchy_lower(p_, zl) * p_.scale;  // undilated value at zs
    prev_z_ = zs;
    prev_g_ = g;
    have_prev_ = true;
    cplx out = g / p_.scale;
    return reflect ? std::conj(out) : out;
}

double free_stable_density(const StableParams& p, double x) {
    require_admissible(p);
    if (p.alpha == 1.0 && (p.rho == 0.0 || p.rho == 1.0)) return 0.0;  // point mass
    cplx g = free_stable_cauchy(p, cplx(x, 0.0));
    double d = g.imag() / kPi;  // boundary values taken from C-, where Im G >= 0
    return d > 0.0 ? d : 0.0;
}

namespace {

// integral of the density over [a,b] by adaptive Gauss-Legendre (15 pt)
double gl15(const std::function<double(double)>& f, double a, double b) {
    static const double xs[8] = {0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
                                 0.5709721726085388, 0.7244177313601701, 0.8482065834104272,
                                 0.9372733924007060, 0.9879925180204854};
    static const double ws[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                                 0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                                 0.0703660474881081, 0.0307532419961173};
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = ws[0] * f(c);
    for (int i = 1; i < 8; ++i) s += ws[i] * (f(c + h * xs[i]) + f(c - h * xs[i]));
    return s * h;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    double whole = gl15(f, a, b);
    double m = 0.5 * (a + b);
    double split = gl15(f, a, m) + gl15(f, m, b);
    if (depth <= 0 || std::abs(whole - split) <= tol * (1.0 + std::abs(split))) return split;
    return adaptive(f, a, m, tol, depth - 1) + adaptive(f, m, b, tol, depth - 1);
}

// tail integral of the density on [X, +inf) (side > 0) or (-inf, -X] (side < 0)
// by term-wise integration of the Lagrange series; valid for X > series radius.
double series_tail_mass(const StableParams& p, double X, int side) {
    double a = p.alpha;
    double sum = 0.0;
    for (int n = 1; n <= 400; ++n) {
        auto [lg, sign] = log_series_coeff(a, n);
        // Im[(-1)^n (e^{i rho pi} z)^{-n a}] at z = side*X - i0
        double phase = (side > 0) ? -n * a * p.rho * kPi : n * a * (1.0 - p.rho) * kPi;
        double term = sign * std::exp(lg - n * a * std::log(X)) * ((n % 2) ? -1.0 : 1.0) * std::sin(phase);
        double contrib = term / (n * a);
        sum += contrib;
        if (std::abs(contrib) < 1e-17) break;
    }
    return sum / kPi;
}

}  // namespace

double free_stable_mass_above(const StableParams& p, double x0) {
    require_admissible(p);
    if (p.alpha == 1.0 && (p.rho == 0.0 || p.rho == 1.0)) {
        double atom = (p.rho == 1.0) ? p.scale : -p.scale;
        return atom >= x0 ? 1.0 : 0.0;
    }
    double X = p.scale * std::max(3.0 * free_stable_series_radius(p.alpha), 8.0);
    if (x0 >= X) {
        StableParams q = p;
        q.scale = 1.0;
        return series_tail_mass(q, x0 / p.scale, +1);
    }
    auto f = [&](double x) { return free_stable_density(p, x); };
    StableParams q = p;
    q.scale = 1.0;
    return adaptive(f, x0, X, 1e-9, 14) + series_tail_mass(q, X / p.scale, +1);
}

double free_stable_mass_below(const StableParams& p, double x0) {
    StableParams r = p;
    r.rho = 1.0 - p.rho;  // reflected law
    return free_stable_mass_above(r, -x0);
}

cplx boolean_stable_eta(const StableParams& p, cplx z) {
    require_admissible(p);
    if (z.imag() < 0.0) return std::conj(boolean_stable_eta(p, std::conj(z)));
    cplx base = phase_neg(p.rho) * (p.scale * z);
    if (base.imag() == 0.0 && base.real() <= 0.0) base += cplx(0.0, 1e-300);
    return -principal_pow(base, p.alpha);
}

std::optional<std::pair<double, double>> boolean_stable_atom(const StableParams& p) {
    if (p.alpha == 1.0 && p.rho == 1.0) return std::make_pair(p.scale, 1.0);
    if (p.alpha == 1.0 && p.rho == 0.0) return std::make_pair(-p.scale, 1.0);
    return std::nullopt;
}

double boolean_stable_density(const StableParams& p, double x) {
    require_admissible(p);
    if (!(p.alpha <= 1.0)) throw std::domain_error("Boolean stable density needs alpha <= 1");
    if (x == 0.0) throw std::domain_error("Boolean stable density undefined at 0");
    if (p.alpha == 1.0) {
        if (p.rho == 0.0 || p.rho == 1.0) return 0.0;  // point mass at -+scale
        double a = -std::cos(p.rho * kPi) * p.scale;
        double b = std::sin(p.rho * kPi) * p.scale;
        return b / (kPi * ((x - a) * (x - a) + b * b));
    }
    double xs = x / p.scale;
    double rho_side = xs > 0.0 ? p.rho : 1.0 - p.rho;
    double y = std::abs(xs);
    double arp = p.alpha * rho_side * kPi;
    double s = std::sin(arp);
    if (s == 0.0) return 0.0;  // all mass on the other side
    double ya = std::pow(y, p.alpha);
    double q = s / kPi * std::pow(y, p.alpha - 1.0) / (ya * ya + 2.0 * ya * std::cos(arp) + 1.0);
    return q / p.scale;
}

double levy_density(const StableParams& p, double x) {
    if (p.family != StableParams::Family::Boolean || !p.in_divisible_set())
        throw std::domain_error("free Levy density needs a Boolean law in the divisible set");
    if (x == 0.0) throw std::domain_error("free Levy density undefined at 0");
    double a = p.alpha;
    double e = a / (1.0 - a);
    StableParams q;
    q.family = StableParams::Family::Free;
    q.alpha = 1.0 - a;
    if (x > 0.0) {
        q.rho = a * p.rho / (1.0 - a);
        return std::pow(x, e - 1.0) * free_stable_density(q, std::pow(x, e));
    }
    q.rho = (a * p.rho + 1.0 - 2.0 * a) / (1.0 - a);
    double y = -x;
    return std::pow(y, e - 1.0) * free_stable_density(q, -std::pow(y, e));
}

cplx mixture_eta(const StableParams& p, const std::function<cplx(cplx)>& eta_nu, cplx z) {
    require_admissible(p);
    if (p.family != StableParams::Family::Boolean)
        throw std::domain_error("mixture eta is defined through the Boolean law");
    return eta_nu(boolean_stable_eta(p, z));
}

cplx stable_s_closed_form(const StableParams& p, double u) {
    require_admissible(p);
    if (!(u > -1.0 && u < 0.0)) throw std::domain_error("S-transform argument outside (-1,0)");
    double expo = (1.0 - p.alpha) / p.alpha;
    cplx body;
    if (p.family == StableParams::Family::Boolean)
        body = std::pow(-u / (1.0 + u), expo);
    else
        body = std::pow(-u, expo);
    return -phase_pos(p.rho) * body / p.scale;
}

cplx stable_t_closed_form(const StableParams& p, double u) {
    return 1.0 / stable_s_closed_form(p, u);
}

StableParams positive_stable_boxtimes_power(const StableParams& p, double t) {
    require_admissible(p);
    if (p.rho != 1.0) throw std::domain_error("multiplicative powers need the positive law (rho = 1)");
    if (!(t > 0.0)) throw std::domain_error("power exponent must be positive");
    StableParams out = p;
    out.alpha = p.alpha / (p.alpha + t * (1.0 - p.alpha));
    // S scales with the t-th power; the dilation factor follows from S' = S^t
    out.scale = std::pow(p.scale, t);
    return out;
}

}  // namespace freeconv
