#pragma once

#include <cmath>
#include <complex>

namespace zeckdist {

using cplx = std::complex<double>;

/// Complex 2x2 matrix [[a,b],[c,d]], row major.
struct mat2c {
    cplx a{}, b{}, c{}, d{};

    static constexpr mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr mat2c zero() { return {}; }
    static constexpr mat2c diagonal(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

    friend mat2c operator*(const mat2c& l, const mat2c& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend mat2c operator+(const mat2c& l, const mat2c& r) {
        return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
    }
    friend mat2c operator-(const mat2c& l, const mat2c& r) {
        return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
    }
    friend mat2c operator*(cplx s, const mat2c& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }

    cplx det() const { return a * d - b * c; }

    mat2c inverse() const {
        const cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    double frobenius() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }

    /// Largest singular value.  For 2x2 this is closed-form:
    /// sigma_max^2 = (f + sqrt(f^2 - 4|det|^2)) / 2 with f = ||M||_F^2.
    double spectral_norm() const {
        const double f = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
        const double dd = std::abs(det());
        const double disc = std::max(0.0, f * f - 4.0 * dd * dd);
        return std::sqrt(0.5 * (f + std::sqrt(disc)));
    }

    /// Apply to a column vector (x, y)^T.
    void apply(cplx& x, cplx& y) const {
        const cplx nx = a * x + b * y;
        const cplx ny = c * x + d * y;
        x = nx;
        y = ny;
    }
};

}  // namespace zeckdist
