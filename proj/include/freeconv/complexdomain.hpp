#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace freeconv {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

enum class Domain {
    UpperHalfPlane,  // Im z > 0
    LowerHalfPlane,  // Im z < 0
    SlitPlane        // C \ [0, +inf)
};

// Argument normalized to [0, 2*pi): zero on the positive real axis,
// increasing counterclockwise.
inline double arg_ccw(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

inline bool in_domain(cplx z, Domain d) {
    switch (d) {
        case Domain::UpperHalfPlane: return z.imag() > 0.0;
        case Domain::LowerHalfPlane: return z.imag() < 0.0;
        case Domain::SlitPlane:      return z.imag() != 0.0 || z.real() < 0.0;
    }
    return false;
}

inline bool in_closure(cplx z, Domain d) {
    switch (d) {
        case Domain::UpperHalfPlane: return z.imag() >= 0.0;
        case Domain::LowerHalfPlane: return z.imag() <= 0.0;
        case Domain::SlitPlane:      return true;
    }
    return false;
}

// Projects a point that strayed just outside onto the closed domain.
inline cplx clamp_to_closure(cplx z, Domain d) {
    switch (d) {
        case Domain::UpperHalfPlane:
            return z.imag() >= 0.0 ? z : cplx(z.real(), 0.0);
        case Domain::LowerHalfPlane:
            return z.imag() <= 0.0 ? z : cplx(z.real(), 0.0);
        case Domain::SlitPlane:
            return z;
    }
    return z;
}

inline const char* domain_name(Domain d) {
    switch (d) {
        case Domain::UpperHalfPlane: return "upper half-plane";
        case Domain::LowerHalfPlane: return "lower half-plane";
        case Domain::SlitPlane:      return "slit plane";
    }
    return "?";
}

// A complex evaluation point annotated with the domain it must lie in.
// `boundary_limit` marks points meant as x + i*eps boundary evaluations.
struct ComplexPoint {
    cplx value{};
    Domain domain_tag = Domain::UpperHalfPlane;
    bool boundary_limit = false;

    static ComplexPoint upper(cplx z, bool boundary = false) { return {z, Domain::UpperHalfPlane, boundary}; }
    static ComplexPoint lower(cplx z, bool boundary = false) { return {z, Domain::LowerHalfPlane, boundary}; }
    static ComplexPoint slit(cplx z, bool boundary = false)  { return {z, Domain::SlitPlane, boundary}; }

    void require_valid() const {
        if (boundary_limit) {
            if (!in_closure(value, domain_tag))
                throw std::domain_error("boundary point outside closure of " + std::string(domain_name(domain_tag)));
            return;
        }
        if (!in_domain(value, domain_tag))
            throw std::domain_error("point outside " + std::string(domain_name(domain_tag)));
    }
};

// Principal-branch power on C \ (-inf, 0].
inline cplx principal_pow(cplx z, double a) {
    return std::pow(z, a);
}

// sqrt(z^2 - c) with the branch that behaves like z at infinity
// (cut on the segment [-sqrt(c), sqrt(c)] for c > 0).
inline cplx sqrt_asym_linear(cplx z, double c) {
    double r = std::sqrt(c);
    return std::sqrt(z - r) * std::sqrt(z + r);
}

}  // namespace freeconv
