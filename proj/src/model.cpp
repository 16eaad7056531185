#include "hotw/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hotw/cache.hpp"
#include "hotw/errors.hpp"

namespace hotw::model {

namespace {

// Half-integer powers with selectable continuation across (-inf, 0). The
// rotated branches are meant for points away from the positive real axis.
bool rotate_for(cplx zeta, Branch br) {
    if (br == Branch::principal) return false;
    const double im = zeta.imag();
    const bool upper = (im > 0.0) || (im == 0.0 && !std::signbit(im));
    return (br == Branch::below) ? upper : !upper;
}

cplx branch_sqrt(cplx zeta, Branch br) {
    const cplx s = std::sqrt(zeta);
    return rotate_for(zeta, br) ? -s : s;
}

cplx branch_quarter(cplx zeta, Branch br) {
    const cplx q = std::sqrt(std::sqrt(zeta));
    if (!rotate_for(zeta, br)) return q;
    return (br == Branch::below) ? cplx(0.0, -1.0) * q : cplx(0.0, 1.0) * q;
}

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace

void ModelParams::validate() const {
    if (k < 0) throw std::invalid_argument("ModelParams: k must be >= 0");
    if (t.size() != static_cast<size_t>(2 * k))
        throw std::invalid_argument("ModelParams: t must have exactly 2k entries");
    for (double v : t)
        if (!std::isfinite(v)) throw std::invalid_argument("ModelParams: non-finite t");
    if (rh_tol < 1e-13) throw std::invalid_argument("ModelParams: rh_tol below 1e-13");
}

std::string ModelParams::cache_key() const {
    std::ostringstream os;
    os.precision(17);
    os << "psi2k|k=" << k << "|t=";
    for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << "|R=" << truncation_radius << "|tol=" << rh_tol;
    return os.str();
}

cplx theta(cplx zeta, const ModelParams& p, Branch br) {
    if (zeta == cplx(0.0)) return 0.0;
    const cplx s = branch_sqrt(zeta, br);
    cplx acc = (2.0 / (4.0 * p.k + 3.0)) * ipow(zeta, 2 * p.k + 1) * s;
    double sign = 1.0;
    for (int j = 0; j < 2 * p.k; ++j) {
        acc -= 2.0 * sign * p.t[static_cast<size_t>(j)] / (2.0 * j + 1.0) * ipow(zeta, j) * s;
        sign = -sign;
    }
    return acc;
}

cplx theta_deriv(cplx zeta, const ModelParams& p, Branch br) {
    const cplx s = branch_sqrt(zeta, br);  // zeta^{(2j-1)/2} = zeta^{j-1} s
    cplx acc = ipow(zeta, 2 * p.k) * s;
    double sign = 1.0;
    for (int j = 0; j < 2 * p.k; ++j) {
        acc -= sign * p.t[static_cast<size_t>(j)] * ipow(zeta, j - 1 >= 0 ? j - 1 : 0) *
               (j >= 1 ? s : s / zeta);
        sign = -sign;
    }
    return acc;
}

Mat2 N_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx em = std::polar(1.0, -M_PI / 4.0);
    const cplx ep = std::polar(1.0, M_PI / 4.0);
    return Mat2(r * em, r * ep, -r * em, r * ep);
}

Mat2 S1() { return Mat2(1.0, 1.0, 0.0, 1.0); }
Mat2 S2() { return Mat2(1.0, 0.0, 1.0, 1.0); }
Mat2 S3() { return Mat2(0.0, 1.0, -1.0, 0.0); }
Mat2 S4() { return S2(); }

Mat2 W(cplx zeta, const ModelParams& p, Branch br) {
    if (zeta == cplx(0.0)) throw endpoint_singular_error("W: singular at zeta = 0");
    const cplx q = branch_quarter(zeta, br);
    const cplx th = theta(zeta, p, br);
    const cplx em = std::exp(-th), ep = std::exp(th);
    const Mat2 n = N_matrix();
    return Mat2(n(0, 0) * em / q, n(0, 1) * ep / q, n(1, 0) * em * q, n(1, 1) * ep * q);
}

Mat2 W_deriv(cplx zeta, const ModelParams& p, Branch br) {
    if (zeta == cplx(0.0)) throw endpoint_singular_error("W_deriv: singular at zeta = 0");
    const cplx q = branch_quarter(zeta, br);
    const cplx th = theta(zeta, p, br);
    const cplx dth = theta_deriv(zeta, p, br);
    const cplx em = std::exp(-th), ep = std::exp(th);
    const Mat2 n = N_matrix();
    const cplx a = 1.0 / (4.0 * zeta);
    // d/dzeta of diag(zeta^{-1/4}, zeta^{1/4}) N diag(e^{-th}, e^{th})
    return Mat2(n(0, 0) * em / q * (-a - dth), n(0, 1) * ep / q * (-a + dth),
                n(1, 0) * em * q * (a - dth), n(1, 1) * ep * q * (a + dth));
}

namespace {

// || W S_j W^{-1} - I || computed without forming the growing exponential:
// the conjugated nilpotent scales by e^{-2 theta} (upper) or e^{+2 theta}
// (lower), times an algebraic factor.
double ray_jump_deviation(double radius, double angle, bool upper_nilpotent,
                          const ModelParams& p) {
    const cplx zeta = std::polar(radius, angle);
    const cplx th = theta(zeta, p, Branch::principal);
    const double x = upper_nilpotent ? -2.0 * th.real() : 2.0 * th.real();
    if (x > 0.0) return std::numeric_limits<double>::infinity();
    const cplx rs = branch_sqrt(zeta, Branch::principal);
    // P N e12 N^{-1} P^{-1} = (-i/2) [[1, zeta^{-1/2}], [-zeta^{1/2}, -1]]
    // P N e21 N^{-1} P^{-1} = ( i/2) [[1, -zeta^{-1/2}], [zeta^{1/2}, -1]]
    const double alg = 0.5 * std::max({1.0, std::abs(rs), 1.0 / std::abs(rs)});
    return std::exp(x) * alg;
}

}  // namespace

double choose_truncation_radius(const ModelParams& p) {
    const double phi = p.ray_angle();
    double R = 2.0;
    while (R < 64.0) {
        const double d1 = ray_jump_deviation(R, 0.0, true, p);
        const double d2 = ray_jump_deviation(R, phi, false, p);
        const double d4 = ray_jump_deviation(R, -phi, false, p);
        if (std::max({d1, d2, d4}) < p.jump_tol) return R;
        R += 0.25;
    }
    throw std::invalid_argument("choose_truncation_radius: no radius below 64 works");
}

contour::CanonicalRHProblem build_psi_problem(const ModelParams& p) {
    ModelParams params = p;
    params.validate();
    if (params.truncation_radius == 0.0)
        params.truncation_radius = choose_truncation_radius(params);
    const double R = params.truncation_radius;
    const double phi = params.ray_angle();
    const cplx e2 = std::polar(1.0, phi);
    const cplx e4 = std::polar(1.0, -phi);

    using contour::ContourComponent;
    contour::CanonicalRHProblem prob;
    prob.components = {
        ContourComponent::segment(1.0, R, 8),                                     // Gamma~1
        ContourComponent::segment(R * e2, e2, 8),                                 // Gamma~2
        ContourComponent::segment(R * e4, e4, 8),                                 // Gamma~4
        ContourComponent::circular_arc(e2, std::polar(1.0, 0.5 * phi), 1.0, 8),   // Gamma~21
        ContourComponent::circular_arc(1.0, std::polar(1.0, -0.5 * phi), e4, 8),  // Gamma~14
        ContourComponent::circular_arc(e4, -1.0, e2, 8),                          // Gamma~42
    };

    prob.jump = [params](int comp, cplx zeta) -> Mat2 {
        switch (comp) {
            case 0: {  // W S1 W^{-1} = I + e^{-2 theta} P N e12 N^{-1} P^{-1}
                const cplx f = std::exp(-2.0 * theta(zeta, params, Branch::principal));
                const cplx rs = branch_sqrt(zeta, Branch::principal);
                const cplx c(0.0, -0.5);
                return Mat2::identity() + f * Mat2(c, c / rs, -c * rs, -c);
            }
            case 1:
            case 2: {  // W S2 W^{-1} = I + e^{+2 theta} P N e21 N^{-1} P^{-1}
                const cplx f = std::exp(2.0 * theta(zeta, params, Branch::principal));
                const cplx rs = branch_sqrt(zeta, Branch::principal);
                const cplx c(0.0, 0.5);
                return Mat2::identity() + f * Mat2(c, -c / rs, c * rs, -c);
            }
            case 3:
                return S4().inverse() * S1() * W(zeta, params, Branch::principal).inverse();
            case 4:
                return S4().inverse() * W(zeta, params, Branch::principal).inverse();
            case 5:
                return W(zeta, params, Branch::below).inverse();
            default:
                throw std::invalid_argument("build_psi_problem: bad component id");
        }
    };
    prob.finalize();
    return prob;
}

Mat2 phi_from_psi(const rh::SpectralSolution& sol, const ModelParams& p, cplx zeta) {
    const double r = std::abs(zeta);
    const double phi = p.ray_angle();
    const double arg = std::arg(zeta);
    const double atol = 1e-12;
    if (std::abs(r - 1.0) < atol)
        throw std::invalid_argument("phi_from_psi: point on the unit circle, pass a side");
    Mat2 pref;
    if (r > 1.0) {
        pref = W(zeta, p, Branch::principal);
    } else {
        if (std::abs(arg) < atol || std::abs(std::abs(arg) - phi) < atol ||
            std::abs(std::abs(arg) - M_PI) < atol)
            throw std::invalid_argument("phi_from_psi: point on a sector boundary, pass a side");
        if (arg > -phi && arg < 0.0)
            pref = S4().inverse();
        else if (arg > 0.0 && arg < phi)
            pref = S4().inverse() * S1();
        else if (arg > phi)
            pref = S3();
        else
            pref = Mat2::identity();
    }
    return sol.evaluate(zeta) * pref;
}

KernelEvaluator::KernelEvaluator(ModelParams params, rh::SpectralSolution sol)
    : params_(std::move(params)), sol_(std::move(sol)) {}

KernelEvaluator KernelEvaluator::build(ModelParams params,
                                       const std::optional<std::string>& cache_dir) {
    params.validate();
    if (params.truncation_radius == 0.0)
        params.truncation_radius = choose_truncation_radius(params);
    auto problem = build_psi_problem(params);
    const std::string key = params.cache_key();
    if (cache_dir) {
        auto blocks = cachefile::load_blocks(*cache_dir, key);
        if (blocks && blocks->size() == problem.components.size())
            return KernelEvaluator(params, rh::SpectralSolution::attach(problem, std::move(*blocks)));
    }
    auto sol = rh::adaptive_solve(problem, params.rh_tol);
    if (cache_dir) cachefile::save_solution(*cache_dir, key, sol);
    return KernelEvaluator(params, std::move(sol));
}

std::array<cplx, 2> KernelEvaluator::phi12(double u) const {
    using rh::Side;
    const double R = params_.truncation_radius;
    // The free outer endpoint of the ray: U vanishes there, nudging off the
    // exact endpoint is harmless (phi is already at the e^{-theta(R)} scale).
    if (std::abs(u - R) < 1e-9) u = R - 1e-9;
    if (std::abs(u - 1.0) < 1e-9) {
        // Junction of the contour. The column is entire, so the inner-sector
        // limit is the value; the zero-sum solution makes it finite.
        const int jidx = sol_.problem.components[0].junction_at_start;
        const Mat2 psi = sol_.evaluate_at_junction(jidx, cplx(1.0 - 1e-6, 0.0));
        return psi * std::array<cplx, 2>{1.0, -1.0};
    }
    if (u > 1.0) {
        const Mat2 psi = (u < R) ? sol_.evaluate(u, Side::plus, 0) : sol_.evaluate(u);
        // W column 1 = e^{-theta} (N00 zeta^{-1/4}, N10 zeta^{1/4})
        const cplx q = branch_quarter(u, Branch::principal);
        const cplx em = std::exp(-theta(u, params_, Branch::principal));
        const Mat2 n = N_matrix();
        const std::array<cplx, 2> wcol{n(0, 0) * em / q, n(1, 0) * em * q};
        return psi * wcol;
    }
    if (u >= -1.0) {
        // -1 sits in the interior of the left arc; the inside of the disk is
        // its minus side.
        const Mat2 psi = sol_.evaluate(u, Side::minus, 5);
        return psi * std::array<cplx, 2>{1.0, -1.0};
    }
    // u < -1: continuation across Gamma_2 (route W_+ S2) with the Gamma_4
    // route (W_- S4^{-1}) as a runtime consistency check.
    const Mat2 psi = sol_.evaluate(u);
    const Mat2 wp = W(cplx(u, 0.0), params_, Branch::above);
    const Mat2 wm = W(cplx(u, 0.0), params_, Branch::below);
    const auto via2 = psi * (wp * std::array<cplx, 2>{1.0, 1.0});
    const auto via4 = psi * (wm * std::array<cplx, 2>{1.0, -1.0});
    const double scale = std::abs(via2[0]) + std::abs(via2[1]) + 1.0;
    if (std::abs(via2[0] - via4[0]) + std::abs(via2[1] - via4[1]) > 1e-6 * scale)
        throw consistency_error("phi12: two-path continuation mismatch at u < -1");
    return via2;
}

std::array<cplx, 2> KernelEvaluator::phi12_deriv(double u) const {
    using rh::Side;
    const double R = params_.truncation_radius;
    if (std::abs(u - R) < 1e-9) u = R - 1e-9;
    if (std::abs(u - 1.0) < 1e-6) {
        // Too close to the junction for the component-wise derivative sums;
        // the column is entire so a central difference of phi12 is accurate.
        const double h = 3e-4;
        const auto a = phi12(u + h);
        const auto b = phi12(u - h);
        return {(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)};
    }
    if (u > 1.0) {
        const bool oncut = (u < R);
        const Mat2 psi = oncut ? sol_.evaluate(u, Side::plus, 0) : sol_.evaluate(u);
        const Mat2 dpsi = oncut ? sol_.evaluate_deriv(u, Side::plus, 0) : sol_.evaluate_deriv(u);
        const cplx q = branch_quarter(u, Branch::principal);
        const cplx th = theta(u, params_, Branch::principal);
        const cplx dth = theta_deriv(u, params_, Branch::principal);
        const cplx em = std::exp(-th);
        const Mat2 n = N_matrix();
        const cplx a = 1.0 / (4.0 * u);
        const std::array<cplx, 2> wcol{n(0, 0) * em / q, n(1, 0) * em * q};
        const std::array<cplx, 2> dwcol{n(0, 0) * em / q * (-a - dth),
                                        n(1, 0) * em * q * (a - dth)};
        return {dpsi.a[0] * wcol[0] + dpsi.a[1] * wcol[1] + psi.a[0] * dwcol[0] + psi.a[1] * dwcol[1],
                dpsi.a[2] * wcol[0] + dpsi.a[3] * wcol[1] + psi.a[2] * dwcol[0] + psi.a[3] * dwcol[1]};
    }
    if (u >= -1.0) {
        const Mat2 dpsi = sol_.evaluate_deriv(u, Side::minus, 5);
        return dpsi * std::array<cplx, 2>{1.0, -1.0};
    }
    const Mat2 psi = sol_.evaluate(u);
    const Mat2 dpsi = sol_.evaluate_deriv(u);
    const Mat2 wp = W(cplx(u, 0.0), params_, Branch::above);
    const Mat2 dwp = W_deriv(cplx(u, 0.0), params_, Branch::above);
    const std::array<cplx, 2> v{1.0, 1.0};
    const auto wv = wp * v;
    const auto dwv = dwp * v;
    return {dpsi.a[0] * wv[0] + dpsi.a[1] * wv[1] + psi.a[0] * dwv[0] + psi.a[1] * dwv[1],
            dpsi.a[2] * wv[0] + dpsi.a[3] * wv[1] + psi.a[2] * dwv[0] + psi.a[3] * dwv[1]};
}

cplx KernelEvaluator::kernel_complex(double u, double v) const {
    const double delta = 1e-4 * (1.0 + std::abs(u));
    const cplx m2pii(0.0, -2.0 * M_PI);
    if (std::abs(u - v) >= delta) {
        const auto pu = phi12(u);
        const auto pv = phi12(v);
        return (pu[0] * pv[1] - pv[0] * pu[1]) / (m2pii * (u - v));
    }
    const double uh = 0.5 * (u + v);
    const auto p = phi12(uh);
    const auto dp = phi12_deriv(uh);
    return (dp[0] * p[1] - dp[1] * p[0]) / m2pii;
}

double KernelEvaluator::kernel(double u, double v) const {
    return kernel_complex(u, v).real();
}

}  // namespace hotw::model
