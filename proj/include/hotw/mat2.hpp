#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace hotw {

using cplx = std::complex<double>;

// Dense 2x2 complex matrix, row major. Value type used for jump matrices,
// solution coefficients and kernel prefactors.
struct Mat2 {
    std::array<cplx, 4> a{};  // [ a[0] a[1] ; a[2] a[3] ]

    constexpr Mat2() = default;
    constexpr Mat2(cplx a00, cplx a01, cplx a10, cplx a11) : a{a00, a01, a10, a11} {}

    static constexpr Mat2 identity() { return Mat2(1.0, 0.0, 0.0, 1.0); }
    static constexpr Mat2 zero() { return Mat2(); }

    cplx& operator()(int r, int c) { return a[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[2 * r + c]; }

    Mat2 operator+(const Mat2& o) const {
        return {a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
                a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]};
    }
    Mat2 operator*(cplx s) const { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }
    Mat2 operator*(double s) const { return *this * cplx(s, 0.0); }
    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] += o.a[i];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat2& operator*=(cplx s) {
        for (int i = 0; i < 4; ++i) a[i] *= s;
        return *this;
    }

    cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

    Mat2 inverse() const {
        const cplx d = det();
        return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
    }

    // Max entrywise magnitude.
    double norm_max() const {
        double m = 0.0;
        for (const auto& e : a) m = std::max(m, std::abs(e));
        return m;
    }

    std::array<cplx, 2> col(int c) const { return {a[c], a[2 + c]}; }
};

inline Mat2 operator*(cplx s, const Mat2& m) { return m * s; }
inline Mat2 operator*(double s, const Mat2& m) { return m * cplx(s, 0.0); }

// Action on a column vector.
inline std::array<cplx, 2> operator*(const Mat2& m, const std::array<cplx, 2>& v) {
    return {m.a[0] * v[0] + m.a[1] * v[1], m.a[2] * v[0] + m.a[3] * v[1]};
}

// Entry magnitude overloads shared by the Chebyshev templates.
inline double entry_mag(double x) { return std::abs(x); }
inline double entry_mag(const cplx& x) { return std::abs(x); }
inline double entry_mag(const Mat2& m) { return m.norm_max(); }

}  // namespace hotw
