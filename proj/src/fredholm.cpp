#include "hotw/fredholm.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hotw::fredholm {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

QuadratureRule gauss_legendre(int m) {
    if (m < 1 || m > 2048) throw std::invalid_argument("gauss_legendre: m out of range");
    QuadratureRule r;
    r.nodes.assign(static_cast<size_t>(m), 0.0);
    r.weights.assign(static_cast<size_t>(m), 0.0);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_m from the Chebyshev-like initial guess.
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.nodes[static_cast<size_t>(i)] = -z;
        r.nodes[static_cast<size_t>(m - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[static_cast<size_t>(i)] = w;
        r.weights[static_cast<size_t>(m - 1 - i)] = w;
    }
    if (m % 2 == 1) r.nodes[static_cast<size_t>(m / 2)] = 0.0;
    return r;
}

namespace {

// log|det| with sign from an extended-precision partial-pivot elimination.
std::pair<long double, int> logdet_lu(LMatrix& a) {
    const int n = static_cast<int>(a.rows());
    long double logdet = 0.0L;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        long double best = std::abs(a(k, k));
        for (int r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > best) {
                best = std::abs(a(r, k));
                piv = r;
            }
        if (best == 0.0L) return {-std::numeric_limits<long double>::infinity(), 0};
        if (piv != k) {
            a.row(piv).swap(a.row(k));
            sign = -sign;
        }
        const long double d = a(k, k);
        logdet += std::log(std::abs(d));
        if (d < 0.0L) sign = -sign;
        for (int r = k + 1; r < n; ++r) {
            const long double f = a(r, k) / d;
            a(r, k) = f;
            for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
        }
    }
    return {logdet, sign};
}

LMatrix weighted_matrix(const std::function<double(double, double)>& kernel, double a, double b,
                        int m, std::vector<double>* xs = nullptr,
                        std::vector<double>* sws = nullptr) {
    const auto rule = gauss_legendre(m);
    std::vector<double> x(static_cast<size_t>(m)), sw(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        x[static_cast<size_t>(i)] = a + 0.5 * (b - a) * (rule.nodes[static_cast<size_t>(i)] + 1.0);
        sw[static_cast<size_t>(i)] = std::sqrt(0.5 * (b - a) * rule.weights[static_cast<size_t>(i)]);
    }
    LMatrix mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double kv = kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)]);
            if (!std::isfinite(kv))
                throw std::runtime_error("fredholm: non-finite kernel value at (" +
                                         std::to_string(x[static_cast<size_t>(i)]) + ", " +
                                         std::to_string(x[static_cast<size_t>(j)]) + ")");
            mat(i, j) = static_cast<long double>(-sw[static_cast<size_t>(i)] * kv *
                                                 sw[static_cast<size_t>(j)]) +
                        (i == j ? 1.0L : 0.0L);
        }
    if (xs) *xs = std::move(x);
    if (sws) *sws = std::move(sw);
    return mat;
}

}  // namespace

double fredholm_log_det(const std::function<double(double, double)>& kernel, double a, double b,
                        int m) {
    LMatrix mat = weighted_matrix(kernel, a, b, m);
    auto [logdet, sign] = logdet_lu(mat);
    if (sign <= 0)
        throw singular_operator_error("fredholm_log_det: non-positive determinant");
    return static_cast<double>(logdet);
}

double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b,
                    int m) {
    if (!(b > a)) throw std::invalid_argument("fredholm_det: requires b > a");
    LMatrix mat = weighted_matrix(kernel, a, b, m);
    auto [logdet, sign] = logdet_lu(mat);
    return sign * static_cast<double>(std::exp(logdet));
}

namespace detail {

NystromData nystrom_data(const model::KernelEvaluator& ev, double a, double b, int m) {
    const auto rule = gauss_legendre(m);
    NystromData d;
    d.x.resize(static_cast<size_t>(m));
    d.sw.resize(static_cast<size_t>(m));
    d.phi1.resize(static_cast<size_t>(m));
    d.phi2.resize(static_cast<size_t>(m));
    d.diag.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double xi = a + 0.5 * (b - a) * (rule.nodes[static_cast<size_t>(i)] + 1.0);
        d.x[static_cast<size_t>(i)] = xi;
        d.sw[static_cast<size_t>(i)] = std::sqrt(0.5 * (b - a) * rule.weights[static_cast<size_t>(i)]);
        const auto p = ev.phi12(xi);
        const auto dp = ev.phi12_deriv(xi);
        d.phi1[static_cast<size_t>(i)] = p[0];
        d.phi2[static_cast<size_t>(i)] = p[1];
        d.diag[static_cast<size_t>(i)] =
            ((dp[0] * p[1] - dp[1] * p[0]) / cplx(0.0, -2.0 * M_PI)).real();
    }
    return d;
}

double kernel_from_phi(const NystromData& d, int i, int j) {
    if (i == j) return d.diag[static_cast<size_t>(i)];
    const cplx num = d.phi1[static_cast<size_t>(i)] * d.phi2[static_cast<size_t>(j)] -
                     d.phi1[static_cast<size_t>(j)] * d.phi2[static_cast<size_t>(i)];
    return (num / (cplx(0.0, -2.0 * M_PI) *
                   (d.x[static_cast<size_t>(i)] - d.x[static_cast<size_t>(j)])))
        .real();
}

}  // namespace detail

double choose_truncation(const model::KernelEvaluator& ev, double s, double tol) {
    double b = std::max(s, 0.0) + 2.0;
    while (b < 80.0) {
        if (std::abs(ev.kernel(b, b)) < 0.01 * tol) return b;
        b += 0.5;
    }
    return b;
}

namespace {

double logdet_at_m(const model::KernelEvaluator& ev, double s, double b, int m, int* sign_out) {
    const auto d = detail::nystrom_data(ev, s, b, m);
    LMatrix mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            mat(i, j) =
                static_cast<long double>(-d.sw[static_cast<size_t>(i)] *
                                         detail::kernel_from_phi(d, i, j) *
                                         d.sw[static_cast<size_t>(j)]) +
                (i == j ? 1.0L : 0.0L);
    auto [logdet, sign] = logdet_lu(mat);
    if (sign_out) *sign_out = sign;
    return static_cast<double>(logdet);
}

}  // namespace

DetResult distribution_F(const model::KernelEvaluator& ev, double s, double tol, int m_cap) {
    if (tol < 1e-15) throw std::invalid_argument("distribution_F: tol too small");
    const double b = choose_truncation(ev, s, tol);
    DetResult res;
    res.s = s;
    res.b = b;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int m = 20; m <= m_cap; m *= 2) {
        int sign = 1;
        const double logdet = logdet_at_m(ev, s, b, m, &sign);
        const double F = (sign > 0) ? std::exp(logdet) : -std::exp(logdet);
        res.m_used = m;
        res.logF = logdet;
        res.F = F;
        if (!std::isnan(prev)) {
            res.err_est = std::abs(F - prev);
            if (res.err_est < tol) return res;
        }
        prev = F;
    }
    throw det_unresolved("distribution_F: quadrature cap reached before tolerance", res);
}

double log_deriv(const model::KernelEvaluator& ev, double s, double tol, int m_cap,
                 double* err_out) {
    const double b = choose_truncation(ev, s, tol);
    const auto ps = ev.phi12(s);
    const auto dps = ev.phi12_deriv(s);
    const double kss = ((dps[0] * ps[1] - dps[1] * ps[0]) / cplx(0.0, -2.0 * M_PI)).real();

    double prev = std::numeric_limits<double>::quiet_NaN();
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    for (int m = 20; m <= m_cap; m *= 2) {
        const auto d = detail::nystrom_data(ev, s, b, m);
        LMatrix mat(m, m);
        LVector v(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                mat(i, j) = static_cast<long double>(-d.sw[static_cast<size_t>(i)] *
                                                     detail::kernel_from_phi(d, i, j) *
                                                     d.sw[static_cast<size_t>(j)]) +
                            (i == j ? 1.0L : 0.0L);
            // kernel column at the evaluation point s
            const cplx num = ps[0] * d.phi2[static_cast<size_t>(i)] -
                             d.phi1[static_cast<size_t>(i)] * ps[1];
            const double ks = (num / (cplx(0.0, -2.0 * M_PI) *
                                       (s - d.x[static_cast<size_t>(i)])))
                                  .real();
            v(i) = static_cast<long double>(d.sw[static_cast<size_t>(i)] * ks);
        }
        Eigen::PartialPivLU<LMatrix> lu(mat);
        const long double pivmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (pivmin < 1e-15L)
            throw singular_operator_error("log_deriv: I - K numerically singular");
        const LVector y = lu.solve(v);
        const double r = kss + static_cast<double>(v.dot(y));
        if (!std::isnan(prev)) {
            const double err = std::abs(r - prev);
            if (err < best_err) {
                best_err = err;
                best = r;
            }
            if (err < tol * (1.0 + std::abs(r))) {
                if (err_out) *err_out = err;
                return r;
            }
        }
        prev = r;
        best = r;
    }
    if (err_out) *err_out = best_err;
    return best;
}

DetResult density(const model::KernelEvaluator& ev, double s, double tol, int m_cap) {
    DetResult res = distribution_F(ev, s, tol, m_cap);
    double derr = 0.0;
    const double ld = log_deriv(ev, s, tol, m_cap, &derr);
    res.density = res.F * ld;
    res.err_est = std::max(res.err_est, std::abs(res.F) * derr);
    return res;
}

}  // namespace hotw::fredholm
