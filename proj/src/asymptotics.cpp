#include "hotw/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "hotw/chebyshev.hpp"

namespace hotw::asymptotics {

double GapExpansion::leading_coeff() const {
    const double g1 = std::tgamma(2.0 * k + 1.5);
    const double g2 = std::tgamma(1.5);
    const double g3 = std::tgamma(2.0 * k + 2.0);
    const double r = g1 / (g2 * g3);
    return r * r / (4.0 * (4.0 * k + 3.0));
}

double A(double s, int k) {
    if (s >= 0.0) throw std::invalid_argument("A: requires s < 0");
    const GapExpansion g{k};
    const double as = -s;
    return -g.leading_coeff() * std::pow(as, 4.0 * k + 3.0) - g.log_coeff() * std::log(as);
}

double A_deriv(double s, int k) {
    if (s >= 0.0) throw std::invalid_argument("A_deriv: requires s < 0");
    const GapExpansion g{k};
    const double as = -s;
    return g.leading_coeff() * (4.0 * k + 3.0) * std::pow(as, 4.0 * k + 2.0) - g.log_coeff() / s;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Integral over one panel of the Chebyshev fit of D on [a, b].
struct PanelResult {
    double integral = 0.0;
    double tail = 0.0;
    double worst_point_err = 0.0;
};

PanelResult integrate_panel(const model::KernelEvaluator& ev, double a, double b, int degree,
                            double tol) {
    const auto xs = cheb::cheb_points(degree);
    std::vector<double> vals(xs.size());
    PanelResult r;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double s = a + 0.5 * (b - a) * (xs[i] + 1.0);
        double perr = 0.0;
        const double ld = fredholm::log_deriv(ev, s, tol, 640, &perr);
        vals[i] = ld - A_deriv(s, ev.params().k);
        r.worst_point_err = std::max(r.worst_point_err, perr);
    }
    const auto c = cheb::vals_to_coeffs(vals);
    double acc = 0.0;
    for (int j = 0; j < degree; j += 2) acc += c.coeffs[static_cast<size_t>(j)] * 2.0 / (1.0 - j * j);
    r.integral = 0.5 * (b - a) * acc;
    r.tail = cheb::tail_estimate(c);
    return r;
}

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

ChiEstimate estimate_chi(const model::KernelEvaluator& ev, double M, double s_deep, double tol) {
    if (!(s_deep < M && M < 0.0))
        throw std::invalid_argument("estimate_chi: requires s_deep < M < 0");
    const int k = ev.params().k;
    const double det_tol = std::min(tol, 1e-11);

    ChiEstimate est;
    est.k = k;
    est.err_solver_tail = ev.solution().achieved_tail;

    const auto fM = fredholm::distribution_F(ev, M, det_tol);
    est.err_det_cauchy = fM.err_est;
    const double base = fM.logF - A(M, k);

    // Piecewise Chebyshev fit of D = d/ds log det - A' on panels of width
    // 0.5, refined where the coefficient tail stays above tolerance.
    const double width = 0.5;
    const int degree = 24;
    double acc = 0.0;  // integral of D over (boundary, M)
    est.s_grid.push_back(M);
    est.chi_curve.push_back(base);
    est.point_err.push_back(est.err_det_cauchy);
    double right = M;
    while (right > s_deep + 1e-12) {
        const double left = std::max(s_deep, right - width);
        std::vector<std::pair<double, double>> stack{{left, right}};
        double integral = 0.0, tail = 0.0, perr = 0.0;
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            const auto pr = integrate_panel(ev, a, b, degree, tol);
            if (pr.tail > 10.0 * tol && (b - a) > 0.126) {
                const double mid = 0.5 * (a + b);
                stack.push_back({a, mid});
                stack.push_back({mid, b});
            } else {
                integral += pr.integral;
                tail = std::max(tail, pr.tail);
                perr = std::max(perr, pr.worst_point_err);
            }
        }
        acc += integral;
        est.err_fit_tail = std::max(est.err_fit_tail, tail);
        right = left;
        est.s_grid.push_back(right);
        est.chi_curve.push_back(base - acc);
        est.point_err.push_back(perr);
    }

    const size_t n = est.chi_curve.size();
    if (n < 4) throw std::invalid_argument("estimate_chi: grid too short");
    est.chi_plateau = median3(est.chi_curve[n - 1], est.chi_curve[n - 2], est.chi_curve[n - 3]);

    // Extrapolate chi(s) = chi + c |s|^{-p} over the deepest grid section
    // with the exponent measured, not assumed. The deepest points whose
    // derivative estimates are noisy (the resolvent conditioning wall) are
    // excluded; the exact three-point solve on the deepest clean triple
    // removes the leading power.
    const double noise_cut = std::max(3e-8, tol);
    std::vector<size_t> clean;
    for (size_t i = 1; i < n; ++i)
        if (est.point_err[i] < noise_cut && est.s_grid[i] < -1.0) clean.push_back(i);

    bool fitted = false;
    if (clean.size() >= 3) {
        const size_t i3 = clean[clean.size() - 1];
        const size_t i2 = clean[clean.size() - 2];
        const size_t i1 = clean[clean.size() - 3];
        const double t1 = std::abs(est.s_grid[i1]), t2 = std::abs(est.s_grid[i2]),
                     t3 = std::abs(est.s_grid[i3]);
        const double y1 = est.chi_curve[i1], y2 = est.chi_curve[i2], y3 = est.chi_curve[i3];
        const double ratio = (y1 - y2) / (y2 - y3);
        auto g = [&](double p) {
            return (std::pow(t1, -p) - std::pow(t2, -p)) /
                       (std::pow(t2, -p) - std::pow(t3, -p)) -
                   ratio;
        };
        double lo = 0.3, hi = 16.0;
        if (std::isfinite(ratio) && g(lo) * g(hi) < 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (g(lo) * g(mid) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            const double p = 0.5 * (lo + hi);
            const double c = (y1 - y2) / (std::pow(t1, -p) - std::pow(t2, -p));
            est.chi = y3 - c * std::pow(t3, -p);
            est.fitted_exponent = p;
            fitted = true;
        }
    }
    if (!fitted) {
        // Fallback: least-squares single-power fit over the deepest section.
        const size_t take = std::min<size_t>(10, n / 2 + 1);
        std::vector<double> ss(est.s_grid.end() - static_cast<long>(take), est.s_grid.end());
        std::vector<double> cc(est.chi_curve.end() - static_cast<long>(take),
                               est.chi_curve.end());
        double best_sse = std::numeric_limits<double>::infinity();
        double best_chi = est.chi_plateau, best_p = 0.0;
        for (double p = 0.5; p <= 14.0; p += 0.01) {
            double sg = 0, sgg = 0, sy = 0, sgy = 0;
            const double m = static_cast<double>(take);
            for (size_t i = 0; i < take; ++i) {
                const double g = std::pow(std::abs(ss[i]), -p);
                sg += g;
                sgg += g * g;
                sy += cc[i];
                sgy += g * cc[i];
            }
            const double det = m * sgg - sg * sg;
            if (std::abs(det) < 1e-300) continue;
            const double chi0 = (sgg * sy - sg * sgy) / det;
            const double c0 = (m * sgy - sg * sy) / det;
            double sse = 0;
            for (size_t i = 0; i < take; ++i) {
                const double r = cc[i] - chi0 - c0 * std::pow(std::abs(ss[i]), -p);
                sse += r * r;
            }
            if (sse < best_sse) {
                best_sse = sse;
                best_chi = chi0;
                best_p = p;
            }
        }
        est.chi = best_chi;
        est.fitted_exponent = best_p;
    }

    est.converged = est.err_solver_tail < 100.0 * tol && est.err_det_cauchy < tol &&
                    est.err_fit_tail < 100.0 * tol && fitted && est.fitted_exponent > 0.6;
    return est;
}

double residual_exponent(const ChiEstimate& est, double s_min, double s_max,
                         bool* floor_warning) {
    std::vector<double> lx, ly;
    bool floored = false;
    const double floor = std::max(3.0 * est.err_deriv_points, 1e-9);
    for (size_t i = 0; i < est.s_grid.size(); ++i) {
        const double s = est.s_grid[i];
        if (s < s_min || s > s_max || s >= -1e-9) continue;
        const double r = std::abs(est.chi_curve[i] - est.chi);
        if (r < floor) {
            floored = true;
            continue;
        }
        lx.push_back(std::log(std::abs(s)));
        ly.push_back(std::log(r));
    }
    if (floor_warning) *floor_warning = floored || lx.size() < 3;
    if (lx.size() < 2)
        throw unresolved_error("residual_exponent: too few points above the noise floor", 0.0);
    return fit_slope(lx, ly);
}

TailFit tail_fit_data(const std::vector<double>& s, const std::vector<double>& one_minus_F) {
    TailFit fit;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!(one_minus_F[i] > 1e-13)) {
            fit.floor_warning = true;
            continue;
        }
        lx.push_back(std::log(s[i]));
        ly.push_back(std::log(-std::log(one_minus_F[i])));
    }
    fit.points_used = static_cast<int>(lx.size());
    if (lx.size() < 2)
        throw unresolved_error("tail_fit: all grid values at the numeric floor", 0.0);
    fit.p = fit_slope(lx, ly);
    double sy = 0, sx = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sy += ly[i];
        sx += lx[i];
    }
    fit.c = std::exp(sy / lx.size() - fit.p * sx / lx.size());
    return fit;
}

TailFit tail_fit(const model::KernelEvaluator& ev, const std::vector<double>& s_grid,
                 double tol) {
    std::vector<double> omf(s_grid.size());
    for (size_t i = 0; i < s_grid.size(); ++i) {
        const auto r = fredholm::distribution_F(ev, s_grid[i], tol);
        omf[i] = -std::expm1(r.logF);
    }
    return tail_fit_data(s_grid, omf);
}

}  // namespace hotw::asymptotics
