#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hotw/mat2.hpp"

namespace hotw::cheb {

// Finite Chebyshev-T expansion; coeffs[j] multiplies T_j. The value type is
// scalar or Mat2, both go through the same code path.
template <class T>
struct ChebSeries {
    std::vector<T> coeffs;

    int n() const { return static_cast<int>(coeffs.size()); }
};

// Endpoint-including grid (-1, cos(pi(1 - 1/(n-1))), ..., cos(pi/(n-1)), 1),
// sorted ascending. Despite the "first kind" naming used with this grid in
// the collocation literature, these are the T_{n-1} extrema; we follow the
// displayed grid verbatim.
std::vector<double> cheb_points(int n);

namespace detail {
// cos(k*j*pi/(n-1)) table-free direct transform; O(n^2) on purpose, n stays
// small per component.
inline std::vector<double> dct1_weights(int n, int k) {
    std::vector<double> row(static_cast<size_t>(n));
    const double h = M_PI / (n - 1);
    for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = std::cos(k * j * h);
    return row;
}
}  // namespace detail

// Interpolation coefficients from values on cheb_points(n) (ascending order).
template <class T>
ChebSeries<T> vals_to_coeffs(const std::vector<T>& values) {
    const int n = static_cast<int>(values.size());
    if (n < 1) throw std::invalid_argument("vals_to_coeffs: empty input");
    ChebSeries<T> s;
    if (n == 1) {
        s.coeffs = {values[0]};
        return s;
    }
    s.coeffs.resize(static_cast<size_t>(n));
    // Reorder ascending input to the theta ordering y_j = cos(pi j/(n-1)).
    for (int k = 0; k < n; ++k) {
        auto row = detail::dct1_weights(n, k);
        T acc = values[static_cast<size_t>(n - 1)] * (0.5 * row[0]);
        acc += values[0] * (0.5 * row[static_cast<size_t>(n - 1)]);
        for (int j = 1; j < n - 1; ++j)
            acc += values[static_cast<size_t>(n - 1 - j)] * row[static_cast<size_t>(j)];
        acc *= 2.0 / (n - 1);
        s.coeffs[static_cast<size_t>(k)] = acc;
    }
    s.coeffs[0] *= 0.5;
    s.coeffs[static_cast<size_t>(n - 1)] *= 0.5;
    return s;
}

template <class T>
std::vector<T> coeffs_to_vals(const ChebSeries<T>& s) {
    const auto x = cheb_points(std::max(s.n(), 2));
    std::vector<T> v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = eval_series(s, x[i]);
    return v;
}

// Clenshaw evaluation at x in [-1,1].
template <class T>
T eval_series(const ChebSeries<T>& s, double x) {
    if (std::abs(x) > 1.0 + 1e-12)
        throw std::invalid_argument("eval_series: x outside [-1,1]");
    const int n = s.n();
    if (n == 0) return T{};
    if (n == 1) return s.coeffs[0];
    T b1 = s.coeffs[static_cast<size_t>(n - 1)];
    T b2{};
    for (int j = n - 2; j >= 1; --j) {
        T b0 = s.coeffs[static_cast<size_t>(j)] + (2.0 * x) * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return s.coeffs[0] + x * b1 - b2;
}

// Max entrywise magnitude over the trailing max(2, n/8) coefficients; the
// resolved/unresolved criterion used throughout.
template <class T>
double tail_estimate(const ChebSeries<T>& s) {
    const int n = s.n();
    const int tail = std::max(2, n / 8);
    double m = 0.0;
    for (int j = std::max(0, n - tail); j < n; ++j)
        m = std::max(m, entry_mag(s.coeffs[static_cast<size_t>(j)]));
    return m;
}

}  // namespace hotw::cheb
