#include "freeconv/twopoint.hpp"

#include <cmath>
#include <stdexcept>

namespace freeconv {

void TwoPointPair::require_valid() const {
    if (!(lambda_mu > 0.0 && lambda_mu < 1.0 && lambda_nu > 0.0 && lambda_nu < 1.0))
        throw std::invalid_argument("two-point weights must lie in (0,1)");
    if (alpha_nu < 0.0) throw std::invalid_argument("second factor must be supported on [0,+inf)");
}

Measure TwoPointPair::mu() const {
    if (alpha_mu == 1.0) return Measure::point_mass(1.0);
    return Measure::atomic({{1.0, lambda_mu}, {alpha_mu, 1.0 - lambda_mu}});
}

Measure TwoPointPair::nu() const {
    if (alpha_nu == 1.0) return Measure::point_mass(1.0);
    return Measure::atomic({{1.0, lambda_nu}, {alpha_nu, 1.0 - lambda_nu}});
}

MoebiusH moebius_h(double lambda, double alpha) {
    MoebiusH h;
    h.b = -((1.0 - lambda) + lambda * alpha);
    h.c = lambda + (1.0 - lambda) * alpha;
    h.d = -alpha;
    return h;
}

namespace {

// P(z) = (z^2 + e z - dmu*dnu)^2 + 4 z (c1 z + d1 c2)(z b2 + b1 d2) expanded
std::array<double, 5> expanded_discriminant(const MoebiusH& first, const MoebiusH& second) {
    double e = first.b * second.c - first.c * second.b;  // coefficient of z in the square
    double k = -second.d * first.d;                      // constant term of the square
    // square: (z^2 + e z + k)^2
    std::array<double, 5> p{k * k, 2.0 * e * k, e * e + 2.0 * k, 2.0 * e, 1.0};
    // 4 z (c1 z + d1 c2)(b2 z + b1 d2) with (c1,d1) from `first`, (b2,b1) mixed:
    // the product multiplying 4z is (c_first z + d_first * c_second)(z b_second + b_first * d_second)
    double A1 = first.c, A0 = first.d * second.c;
    double B1 = second.b, B0 = first.b * second.d;
    // 4z (A1 z + A0)(B1 z + B0) = 4 [A1 B1 z^3 + (A1 B0 + A0 B1) z^2 + A0 B0 z] * z
    p[4] += 0.0;
    p[3] += 4.0 * A1 * B1;
    p[2] += 4.0 * (A1 * B0 + A0 * B1);
    p[1] += 4.0 * A0 * B0;
    return p;
}

cplx eval_poly(const std::array<double, 5>& p, cplx z) {
    cplx s = 0.0;
    for (int k = 4; k >= 0; --k) s = s * z + p[size_t(k)];
    return s;
}

}  // namespace

std::array<double, 5> discriminant_coeffs_first(const TwoPointPair& p) {
    // first form: square carries (b_nu c_mu - c_nu b_mu) z, product carries
    // (c_nu z + d_nu c_mu)(z b_mu + b_nu d_mu)
    MoebiusH hm = moebius_h(p.lambda_mu, p.alpha_mu);
    MoebiusH hn = moebius_h(p.lambda_nu, p.alpha_nu);
    MoebiusH first{hn.b, hn.c, hn.d};   // contributes c_nu, d_nu
    MoebiusH second{hm.b, hm.c, hm.d};  // contributes b_mu, c_mu, d_mu
    // adapt to helper: square term e = b_nu c_mu - c_nu b_mu = first.b*second.c - first.c*second.b
    return expanded_discriminant(first, second);
}

std::array<double, 5> discriminant_coeffs_second(const TwoPointPair& p) {
    MoebiusH hm = moebius_h(p.lambda_mu, p.alpha_mu);
    MoebiusH hn = moebius_h(p.lambda_nu, p.alpha_nu);
    MoebiusH first{hm.b, hm.c, hm.d};
    MoebiusH second{hn.b, hn.c, hn.d};
    return expanded_discriminant(first, second);
}

TwoPointClosedForm::TwoPointClosedForm(const TwoPointPair& pair) : pair_(pair) {
    pair_.require_valid();
    hm_ = moebius_h(pair_.lambda_mu, pair_.alpha_mu);
    hn_ = moebius_h(pair_.lambda_nu, pair_.alpha_nu);
    double r = 10.0 * (1.0 + std::abs(pair_.alpha_mu)) * (1.0 + std::abs(pair_.alpha_nu));
    zref_ = cplx(0.0, r);
    auto [r1, r2] = roots_at(zref_);
    // the Denjoy-Wolff branch grows like z / c_nu at infinity
    cplx asym = zref_ / hn_.c;
    omega1_ref_ = std::abs(r1 - asym) <= std::abs(r2 - asym) ? r1 : r2;
}

void TwoPointClosedForm::quad_coeffs(cplx z, cplx& A, cplx& B, cplx& C) const {
    A = hn_.c * z + hn_.d * hm_.c;
    B = -(z * z + (hn_.b * hm_.c - hn_.c * hm_.b) * z - hm_.d * hn_.d);
    C = -z * (z * hm_.b + hn_.b * hm_.d);
}

std::pair<cplx, cplx> TwoPointClosedForm::roots_at(cplx z) const {
    cplx A, B, C;
    quad_coeffs(z, A, B, C);
    cplx disc = std::sqrt(B * B - 4.0 * A * C);
    // stable form: pick the sign avoiding cancellation
    cplx q = (std::real(std::conj(B) * disc) >= 0.0) ? -(B + disc) / 2.0 : -(B - disc) / 2.0;
    cplx r1 = (std::abs(A) > 0.0) ? q / A : cplx(std::numeric_limits<double>::infinity(), 0.0);
    cplx r2 = (std::abs(q) > 0.0) ? C / q : -B / A - r1;
    return {r1, r2};
}

cplx TwoPointClosedForm::continue_root(cplx z_from, cplx w_from, cplx z_to, int depth) const {
    auto [r1, r2] = roots_at(z_to);
    double d1 = std::abs(r1 - w_from), d2 = std::abs(r2 - w_from);
    double sep = std::abs(r1 - r2);
    if (std::min(d1, d2) <= 0.25 * sep || depth <= 0 || std::abs(z_to - z_from) < 1e-13) {
        return d1 <= d2 ? r1 : r2;
    }
    cplx mid = 0.5 * (z_from + z_to);
    cplx wm = continue_root(z_from, w_from, mid, depth - 1);
    return continue_root(mid, wm, z_to, depth - 1);
}

cplx TwoPointClosedForm::omega1(cplx z) const {
    if (z.imag() < 0.0) return std::conj(omega1(std::conj(z)));
    if (z.imag() == 0.0) z += cplx(0.0, 1e-12 * (1.0 + std::abs(z)));
    return continue_root(zref_, omega1_ref_, z, 60);
}

std::pair<cplx, cplx> TwoPointClosedForm::subordination(cplx z) const {
    cplx o1 = omega1(z);
    return {o1, z * hm_(o1)};
}

cplx TwoPointClosedForm::m_transform(cplx z) const {
    cplx o1 = omega1(z);
    return o1 * hm_(o1);
}

cplx TwoPointClosedForm::cauchy(cplx z) const {
    cplx m = m_transform(z);
    return m / (z * (m - 1.0));
}

double TwoPointClosedForm::density(double x, double eps) const {
    return -cauchy(cplx(x, eps)).imag() / kPi;
}

std::vector<double> TwoPointClosedForm::real_branch_points() const {
    auto p = discriminant_coeffs_first(pair_);
    // quartic root isolation by dense scan + bisection; branch points of the
    // examples are real and well separated
    double bound = 1.0;
    for (int k = 0; k < 4; ++k) bound = std::max(bound, 2.0 * std::abs(p[size_t(k)] / p[4]));
    bound = std::min(bound, 1e6);
    auto f = [&](double x) { return eval_poly(p, cplx(x, 0.0)).real(); };
    std::vector<double> roots;
    const int n = 20000;
    double prev_x = -bound, prev_f = f(prev_x);
    for (int i = 1; i <= n; ++i) {
        double x = -bound + 2.0 * bound * i / n;
        double fx = f(x);
        if (prev_f == 0.0) roots.push_back(prev_x);
        else if (prev_f * fx < 0.0) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if (f(lo) * f(mid) <= 0.0) hi = mid; else lo = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

std::pair<TwoPointPair, double> normalize_two_point(const Measure& mu, const Measure& nu) {
    auto ma = mu.point_masses(), na = nu.point_masses();
    if (ma.size() != 2 || na.size() != 2)
        throw std::invalid_argument("normalization needs two atoms on each side");
    auto pick = [](std::vector<std::pair<double, double>>& a) {
        // scale by an atom away from zero; prefer the larger magnitude
        size_t i = std::abs(a[0].first) >= std::abs(a[1].first) ? 0 : 1;
        if (a[i].first == 0.0) throw std::invalid_argument("two-point measure concentrated at zero");
        return i;
    };
    size_t im = pick(ma), in = pick(na);
    double sm = ma[im].first, sn = na[in].first;
    TwoPointPair p;
    p.lambda_mu = ma[im].second;
    p.alpha_mu = ma[1 - im].first / sm;
    p.lambda_nu = na[in].second;
    p.alpha_nu = na[1 - in].first / sn;
    if (p.alpha_nu < 0.0 || sn < 0.0) throw std::invalid_argument("second factor must be positive");
    return {p, sm * sn};
}

}  // namespace freeconv
