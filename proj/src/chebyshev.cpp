#include "hotw/chebyshev.hpp"

namespace hotw::cheb {

std::vector<double> cheb_points(int n) {
    if (n < 2) throw std::invalid_argument("cheb_points: n must be >= 2");
    std::vector<double> x(static_cast<size_t>(n));
    x[0] = -1.0;
    x[static_cast<size_t>(n - 1)] = 1.0;
    const double h = M_PI / (n - 1);
    for (int j = 1; j < n - 1; ++j)
        x[static_cast<size_t>(j)] = std::cos((n - 1 - j) * h);
    // Enforce exact symmetry x_j = -x_{n-1-j}.
    for (int j = 0; j < n / 2; ++j) {
        const double v = 0.5 * (x[static_cast<size_t>(j)] - x[static_cast<size_t>(n - 1 - j)]);
        x[static_cast<size_t>(j)] = v;
        x[static_cast<size_t>(n - 1 - j)] = -v;
    }
    if (n % 2 == 1) x[static_cast<size_t>(n / 2)] = 0.0;
    return x;
}

}  // namespace hotw::cheb
