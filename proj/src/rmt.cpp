#include "freeconv/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace freeconv {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double CounterRng::uniform01(std::uint64_t index) const {
    std::uint64_t h = mix64(seed_ ^ mix64(index));
    return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::gauss_pair(std::uint64_t index) const {
    double u1 = uniform01(2 * index);
    double u2 = uniform01(2 * index + 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * kPi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix haar_unitary(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    CounterRng rng(seed);
    CMatrix a(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            auto [g1, g2] = rng.gauss_pair(std::uint64_t(j) * n + i);
            a.at(i, j) = cplx(g1, g2) / std::sqrt(2.0);
        }

    // Householder QR; reflectors stored in-place below the diagonal.
    std::vector<cplx> taus(n), rdiag(n);
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += std::norm(a.at(i, k));
        norm = std::sqrt(norm);
        cplx akk = a.at(k, k);
        double aab = std::abs(akk);
        cplx phase = (aab > 0.0) ? akk / aab : cplx(1.0, 0.0);
        cplx alpha = -phase * norm;
        rdiag[k] = alpha;
        if (norm == 0.0) { taus[k] = 0.0; continue; }
        // v = x - alpha e1, normalized so v[k] = 1
        cplx vk = akk - alpha;
        if (std::abs(vk) == 0.0) { taus[k] = 0.0; continue; }
        for (int i = k + 1; i < n; ++i) a.at(i, k) /= vk;
        double v2 = 1.0;
        for (int i = k + 1; i < n; ++i) v2 += std::norm(a.at(i, k));
        taus[k] = 2.0 / v2;
        a.at(k, k) = 1.0;
        // apply reflector to remaining columns
        for (int j = k + 1; j < n; ++j) {
            cplx dot = 0.0;
            for (int i = k; i < n; ++i) dot += std::conj(a.at(i, k)) * a.at(i, j);
            dot *= taus[k];
            for (int i = k; i < n; ++i) a.at(i, j) -= dot * a.at(i, k);
        }
    }

    // accumulate Q by applying reflectors to the identity (reverse order)
    CMatrix q = CMatrix::identity(n);
    for (int k = n - 1; k >= 0; --k) {
        if (taus[k] == cplx(0.0)) continue;
        for (int j = 0; j < n; ++j) {
            cplx dot = q.at(k, j);
            for (int i = k + 1; i < n; ++i) dot += std::conj(a.at(i, k)) * q.at(i, j);
            dot *= taus[k];
            q.at(k, j) -= dot;
            for (int i = k + 1; i < n; ++i) q.at(i, j) -= dot * a.at(i, k);
        }
    }

    // phase-normalize: U = Q * diag(r_kk / |r_kk|)
    for (int j = 0; j < n; ++j) {
        double ab = std::abs(rdiag[j]);
        cplx ph = (ab > 0.0) ? rdiag[j] / ab : cplx(1.0, 0.0);
        for (int i = 0; i < n; ++i) q.at(i, j) *= ph;
    }
    return q;
}

double unitarity_defect(const CMatrix& u) {
    int n = u.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx dot = 0.0;
            for (int k = 0; k < n; ++k) dot += std::conj(u.at(k, i)) * u.at(k, j);
            if (i == j) dot -= 1.0;
            s += std::norm(dot);
        }
    return std::sqrt(s);
}

std::vector<double> hermitian_eigenvalues(CMatrix m) {
    int n = m.n;
    auto off_norm = [&] {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = j + 1; i < n; ++i) s += std::norm(m.at(i, j));
        return std::sqrt(2.0 * s);
    };
    double total = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) total += std::norm(m.at(i, j));
    total = std::sqrt(total);
    const double tol = 1e-11 * std::max(total, 1.0);

    for (int sweep = 0; sweep < 40 && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cplx apq = m.at(p, q);
                double abs_apq = std::abs(apq);
                if (abs_apq < 1e-300) continue;
                double app = m.at(p, p).real(), aqq = m.at(q, q).real();
                cplx phase = apq / abs_apq;
                double tau = (aqq - app) / (2.0 * abs_apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                cplx s = t * c * phase;
                // columns p and q: A <- A J with J = [[c, s],[-conj(s), c]]
                for (int i = 0; i < n; ++i) {
                    cplx aip = m.at(i, p), aiq = m.at(i, q);
                    m.at(i, p) = c * aip - std::conj(s) * aiq;
                    m.at(i, q) = s * aip + c * aiq;
                }
                // rows p and q: A <- J* A
                for (int i = 0; i < n; ++i) {
                    cplx api = m.at(p, i), aqi = m.at(q, i);
                    m.at(p, i) = c * api - s * aqi;
                    m.at(q, i) = std::conj(s) * api + c * aqi;
                }
                m.at(p, q) = 0.0;
                m.at(q, p) = 0.0;
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = m.at(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<int> atom_counts(const std::vector<std::pair<double, double>>& atoms, int n) {
    std::vector<int> counts(atoms.size());
    std::vector<std::pair<double, size_t>> remainders(atoms.size());
    int assigned = 0;
    for (size_t k = 0; k < atoms.size(); ++k) {
        double exact = atoms[k].second * n;
        counts[k] = int(std::floor(exact));
        remainders[k] = {exact - counts[k], k};
        assigned += counts[k];
    }
    std::sort(remainders.begin(), remainders.end(), std::greater<>());
    for (int i = 0; assigned < n && i < int(atoms.size()); ++i, ++assigned)
        counts[remainders[size_t(i)].second] += 1;
    return counts;
}

SpectrumSample sample_spectrum(const Measure& mu_atoms, const Measure& nu_atoms, int n,
                               std::uint64_t seed) {
    auto ma = mu_atoms.point_masses();
    auto na = nu_atoms.point_masses();
    if (ma.empty() || na.empty()) throw std::invalid_argument("sampler needs atomic inputs");
    if (!nu_atoms.positive_support()) throw std::invalid_argument("second factor must be positive");

    SpectrumSample out;
    out.matrix_size = n;
    out.seed = seed;
    out.model_descriptor = mu_atoms.describe() + " boxtimes " + nu_atoms.describe();

    auto ca = atom_counts(ma, n);
    auto cb = atom_counts(na, n);
    for (size_t k = 0; k < ma.size(); ++k)
        if (std::abs(ca[k] / double(n) - ma[k].second) > 0.01) out.representation_warning = true;
    for (size_t k = 0; k < na.size(); ++k)
        if (std::abs(cb[k] / double(n) - na[k].second) > 0.01) out.representation_warning = true;

    std::vector<double> diag_a(n), diag_b(n);
    {
        int pos = 0;
        for (size_t k = 0; k < ma.size(); ++k)
            for (int c = 0; c < ca[k]; ++c) diag_a[pos++] = ma[k].first;
        pos = 0;
        for (size_t k = 0; k < na.size(); ++k)
            for (int c = 0; c < cb[k]; ++c) diag_b[pos++] = std::sqrt(na[k].first);
    }

    CMatrix u = haar_unitary(n, seed);
    // M = B U* A U B, assembled as (U diag_b)* diag_a (U diag_b)
    CMatrix ub = u;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) ub.at(i, j) *= diag_b[j];
    CMatrix msub(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            cplx dot = 0.0;
            for (int k = 0; k < n; ++k) dot += std::conj(ub.at(k, i)) * diag_a[k] * ub.at(k, j);
            msub.at(i, j) = dot;
            msub.at(j, i) = std::conj(dot);
        }
    for (int i = 0; i < n; ++i) msub.at(i, i) = cplx(msub.at(i, i).real(), 0.0);

    out.eigenvalues = hermitian_eigenvalues(std::move(msub));
    return out;
}

double ks_distance(const SpectrumSample& sample, const ConvolutionMeasure& predicted) {
    double mass = predicted.total_mass();
    if (std::abs(mass - 1.0) > 1e-2)
        throw std::invalid_argument("predicted measure mass deviates from 1 by more than 1e-2");
    const auto& ev = sample.eigenvalues;
    double n = double(ev.size());
    double ks = 0.0;
    for (size_t i = 0; i < ev.size(); ++i) {
        // compare matching one-sided limits; eigenvalues within rounding of
        // each other count as one jump so exactly-shared atoms cancel
        double atol = 1e-9 * (1.0 + std::abs(ev[i]));
        auto hi = std::upper_bound(ev.begin(), ev.end(), ev[i] + atol) - ev.begin();
        auto lo = std::lower_bound(ev.begin(), ev.end(), ev[i] - atol) - ev.begin();
        ks = std::max(ks, std::abs(double(hi) / n - predicted.cdf(ev[i]) / mass));
        ks = std::max(ks, std::abs(double(lo) / n - predicted.cdf(ev[i], true) / mass));
    }
    return ks;
}

}  // namespace freeconv
