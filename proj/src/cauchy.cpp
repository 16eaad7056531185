#include "hotw/cauchy.hpp"

#include <cmath>
#include <stdexcept>

#include "hotw/errors.hpp"

namespace hotw::cauchy {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
const cplx kInv2PiI = cplx(0.0, -1.0 / kTwoPi);  // 1/(2 pi i)

// Chebyshev T values by recurrence, |x| <= 1.
void chebT_row(double x, int count, std::vector<double>& t) {
    t.resize(static_cast<size_t>(count));
    if (count > 0) t[0] = 1.0;
    if (count > 1) t[1] = x;
    for (int j = 2; j < count; ++j) t[static_cast<size_t>(j)] = 2.0 * x * t[static_cast<size_t>(j - 1)] - t[static_cast<size_t>(j - 2)];
}
}  // namespace

ChartPoint chart_point(cplx w, Side side) {
    ChartPoint p;
    p.w = w;
    p.side = side;
    if (side == Side::off) {
        const cplx s = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
        p.sqrt_prod = s;
        p.psi = 1.0 / (w + s);  // the |psi| <= 1 inverse Joukowski branch
        p.lambda = 0.5 * (std::log(w - 1.0) - std::log(w + 1.0));
    } else {
        const double x = w.real();
        if (std::abs(x) >= 1.0)
            throw endpoint_singular_error("chart_point: boundary value at or beyond an endpoint");
        const double r = std::sqrt((1.0 - x) * (1.0 + x));
        const double sg = (side == Side::plus) ? 1.0 : -1.0;
        p.sqrt_prod = cplx(0.0, sg * r);
        p.psi = cplx(x, -sg * r);
        p.lambda = cplx(0.5 * (std::log(1.0 - x) - std::log(1.0 + x)), sg * 0.5 * M_PI);
    }
    return p;
}

void cauchy_T_sweep(const ChartPoint& p, int count, std::vector<cplx>& out,
                    std::vector<cplx>* dout) {
    if (count < 1) {
        out.clear();
        if (dout) dout->clear();
        return;
    }
    const int N = count;  // need B_0..B_N
    const cplx psi = p.psi;
    const cplx lambda = p.lambda;
    const cplx s = p.sqrt_prod;
    const bool want_d = dout != nullptr;

    const double apsi = std::abs(psi);
    if (apsi > 1.0 + 1e-12)
        throw std::invalid_argument("cauchy_T_sweep: |psi| > 1, wrong branch");

    const cplx dpsi = want_d ? -psi / s : cplx(0.0);
    const cplx atanh_psi = -0.5 * lambda;

    // tau_m = sum_{l odd >= m} psi^{l-m}/l, seeded at m = N.
    std::vector<cplx> tau(static_cast<size_t>(N + 1)), dtau;
    if (want_d) dtau.assign(static_cast<size_t>(N + 1), cplx(0.0));
    const double log_amp = -static_cast<double>(N) * std::log(std::max(apsi, 1e-300));
    if (log_amp < 6.9) {
        // Closed form: psi^{-N}(atanh(psi) - P_N), the amplification |psi|^-N
        // is below 1e3 here.
        cplx P(0.0), dP(0.0);
        cplx pw = psi;  // psi^l
        for (int l = 1; l < N; l += 2) {
            P += pw / static_cast<double>(l);
            if (want_d) dP += static_cast<double>(l) * pw / (psi * static_cast<double>(l));
            pw *= psi * psi;
        }
        const cplx ipsiN = std::pow(psi, -static_cast<double>(N));
        tau[static_cast<size_t>(N)] = ipsiN * (atanh_psi - P);
        if (want_d) {
            const cplx datanh = 1.0 / (1.0 - psi * psi);
            dtau[static_cast<size_t>(N)] =
                dpsi * (-static_cast<double>(N) * ipsiN / psi * (atanh_psi - P) +
                        ipsiN * (datanh - dP));
        }
    } else {
        // Direct series, geometric at rate |psi|^2.
        const int l0 = (N % 2 == 1) ? N : N + 1;
        cplx acc(0.0), dacc(0.0);
        cplx pw = std::pow(psi, static_cast<double>(l0 - N));
        for (int l = l0;; l += 2) {
            const cplx term = pw / static_cast<double>(l);
            acc += term;
            if (want_d)
                dacc += static_cast<double>(l - N) * pw / (psi * static_cast<double>(l));
            if (std::abs(term) < 1e-18 && l > l0) break;
            if (l - l0 > 2000000) break;
            pw *= psi * psi;
        }
        tau[static_cast<size_t>(N)] = acc;
        if (want_d) dtau[static_cast<size_t>(N)] = dpsi * dacc;
    }
    for (int m = N - 1; m >= 0; --m) {
        tau[static_cast<size_t>(m)] = psi * tau[static_cast<size_t>(m + 1)] +
                                      ((m % 2 == 1) ? cplx(1.0 / m) : cplx(0.0));
        if (want_d)
            dtau[static_cast<size_t>(m)] =
                dpsi * tau[static_cast<size_t>(m + 1)] + psi * dtau[static_cast<size_t>(m + 1)];
    }

    // S_m = sum_{l odd < m} psi^{m-l}/l and psi^m, forward.
    const cplx q = 1.0 / (psi - 1.0 / psi);
    const cplx dq = want_d ? p.w / (2.0 * s * s * s) : cplx(0.0);
    const cplx dlambda = want_d ? 1.0 / (s * s) : cplx(0.0);

    std::vector<cplx> B(static_cast<size_t>(N + 1)), dB;
    if (want_d) dB.assign(static_cast<size_t>(N + 1), cplx(0.0));
    cplx S(0.0), dS(0.0), psim(1.0), dpsim(0.0);
    for (int m = 0; m <= N; ++m) {
        const cplx core = 2.0 * lambda * psim + 4.0 * S + 4.0 * tau[static_cast<size_t>(m)];
        B[static_cast<size_t>(m)] = q * core;
        if (want_d) {
            const cplx dcore = 2.0 * (dlambda * psim + lambda * dpsim) + 4.0 * dS +
                               4.0 * dtau[static_cast<size_t>(m)];
            dB[static_cast<size_t>(m)] = dq * core + q * dcore;
        }
        // advance S, psi^m to index m+1
        if (want_d) {
            dS = dpsi * S + psi * dS + ((m % 2 == 1) ? dpsi / static_cast<double>(m) : cplx(0.0));
            dpsim = dpsi * psim + psi * dpsim;
        }
        S = psi * S + ((m % 2 == 1) ? psi / static_cast<double>(m) : cplx(0.0));
        psim *= psi;
    }

    out.resize(static_cast<size_t>(count));
    if (want_d) dout->resize(static_cast<size_t>(count));
    out[0] = kInv2PiI * B[1];
    if (want_d) (*dout)[0] = kInv2PiI * dB[1];
    for (int j = 1; j < count; ++j) {
        out[static_cast<size_t>(j)] =
            kInv2PiI * 0.5 * (B[static_cast<size_t>(j + 1)] - B[static_cast<size_t>(j - 1)]);
        if (want_d)
            (*dout)[static_cast<size_t>(j)] =
                kInv2PiI * 0.5 * (dB[static_cast<size_t>(j + 1)] - dB[static_cast<size_t>(j - 1)]);
    }
}

cplx cauchy_T(int j, cplx z, Side side) {
    if (j < 0) throw std::invalid_argument("cauchy_T: negative degree");
    if (side != Side::off && std::abs(z.imag()) > 1e-12)
        throw std::invalid_argument("cauchy_T: boundary side requested off (-1,1)");
    if (side != Side::off && std::abs(z.real()) >= 1.0)
        throw std::invalid_argument("cauchy_T: boundary side requested off (-1,1)");
    if (side == Side::off && std::abs(z.imag()) < 1e-300 && std::abs(z.real()) < 1.0)
        throw std::invalid_argument("cauchy_T: point on the cut requires a side");
    const ChartPoint p =
        (side == Side::off) ? chart_point(z, Side::off) : chart_point(cplx(z.real(), 0.0), side);
    std::vector<cplx> c;
    cauchy_T_sweep(p, j + 1, c);
    return c[static_cast<size_t>(j)];
}

namespace {

// Contract basis transforms with the series coefficients.
Mat2 contract(const cheb::ChebSeries<Mat2>& series, const std::vector<cplx>& c) {
    Mat2 acc = Mat2::zero();
    for (int j = 0; j < series.n(); ++j) acc += series.coeffs[static_cast<size_t>(j)] * c[static_cast<size_t>(j)];
    return acc;
}

}  // namespace

Mat2 component_infinity_correction(const ContourComponent& comp,
                                   const cheb::ChebSeries<Mat2>& series) {
    if (comp.map.is_affine()) return Mat2::zero();
    const cplx winf = comp.map.map_infinity();
    std::vector<cplx> c;
    cauchy_T_sweep(chart_point(winf, Side::off), series.n(), c);
    return contract(series, c);
}

Mat2 cauchy_component_nocorr(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                             cplx zeta, Side side) {
    const int n = series.n();
    const cplx w = comp.map.apply(zeta);
    std::vector<cplx> c;
    if (side == Side::off) {
        const double iw = w.imag();
        if (iw != 0.0 && std::abs(iw) < 1e-8 && std::abs(w.real()) <= 1.0 - 1e-6) {
            // Too close to the contour for the generic formulas: one-sided
            // limit plus first-order Taylor correction.
            const ChartPoint oncut =
                chart_point(cplx(w.real(), 0.0), iw > 0 ? Side::plus : Side::minus);
            std::vector<cplx> dc;
            cauchy_T_sweep(oncut, n, c, &dc);
            const cplx h(0.0, iw);
            Mat2 acc = Mat2::zero();
            for (int j = 0; j < n; ++j)
                acc += series.coeffs[static_cast<size_t>(j)] * (c[static_cast<size_t>(j)] + h * dc[static_cast<size_t>(j)]);
            return acc;
        }
        if (std::min(std::abs(w - 1.0), std::abs(w + 1.0)) < 1e-13)
            throw endpoint_singular_error("cauchy_component: evaluation at a component endpoint");
        if (iw == 0.0 && std::abs(w.real()) < 1.0)
            throw std::invalid_argument("cauchy_component: on-contour point needs a side");
        cauchy_T_sweep(chart_point(w, Side::off), n, c);
    } else {
        if (std::abs(w.imag()) > 1e-9 * (1.0 + std::abs(w)))
            throw std::invalid_argument("cauchy_component: side given for a point off the component");
        cauchy_T_sweep(chart_point(cplx(w.real(), 0.0), side), n, c);
    }
    return contract(series, c);
}

Mat2 cauchy_component(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                      cplx zeta, Side side) {
    return cauchy_component_nocorr(comp, series, zeta, side) -
           component_infinity_correction(comp, series);
}

Mat2 cauchy_component_deriv(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                            cplx zeta) {
    const cplx w = comp.map.apply(zeta);
    const double iw = w.imag();
    if (iw != 0.0 && std::abs(iw) < 1e-8 && std::abs(w.real()) <= 1.0 - 1e-6) {
        // Within rounding distance of the contour: one-sided derivative.
        const ChartPoint oncut =
            chart_point(cplx(w.real(), 0.0), iw > 0 ? Side::plus : Side::minus);
        std::vector<cplx> c, dc;
        cauchy_T_sweep(oncut, series.n(), c, &dc);
        Mat2 acc = Mat2::zero();
        for (int j = 0; j < series.n(); ++j)
            acc += series.coeffs[static_cast<size_t>(j)] * dc[static_cast<size_t>(j)];
        return acc * comp.map.derivative(zeta);
    }
    if (std::abs(iw) < 1e-12 && std::abs(w.real()) <= 1.0)
        throw std::invalid_argument("cauchy_component_deriv: point on the component");
    std::vector<cplx> c, dc;
    cauchy_T_sweep(chart_point(w, Side::off), series.n(), c, &dc);
    Mat2 acc = Mat2::zero();
    for (int j = 0; j < series.n(); ++j) acc += series.coeffs[static_cast<size_t>(j)] * dc[static_cast<size_t>(j)];
    return acc * comp.map.derivative(zeta);  // chain rule; the M(inf) term is constant
}

Mat2 cauchy_component_deriv_side(const ContourComponent& comp,
                                 const cheb::ChebSeries<Mat2>& series, cplx zeta, Side side) {
    if (side == Side::off) return cauchy_component_deriv(comp, series, zeta);
    const cplx w = comp.map.apply(zeta);
    if (std::abs(w.imag()) > 1e-9 * (1.0 + std::abs(w)))
        throw std::invalid_argument("cauchy_component_deriv_side: point off the component");
    std::vector<cplx> c, dc;
    cauchy_T_sweep(chart_point(cplx(w.real(), 0.0), side), series.n(), c, &dc);
    Mat2 acc = Mat2::zero();
    for (int j = 0; j < series.n(); ++j) acc += series.coeffs[static_cast<size_t>(j)] * dc[static_cast<size_t>(j)];
    return acc * comp.map.derivative(zeta);
}

Eigen::MatrixXcd values_matrix(const CanonicalRHProblem& problem) {
    const int ntot = problem.total_degree();
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(ntot, ntot);
    int off = 0;
    std::vector<double> trow;
    for (const auto& comp : problem.components) {
        const auto x = cheb::cheb_points(comp.degree);
        for (int qi = 0; qi < comp.degree; ++qi) {
            chebT_row(x[static_cast<size_t>(qi)], comp.degree, trow);
            for (int j = 0; j < comp.degree; ++j) E(off + qi, off + j) = trow[static_cast<size_t>(j)];
        }
        off += comp.degree;
    }
    return E;
}

double rho_poly(int j, double p) {
    if (j == 0) return 0.0;
    // R_m(p) = 4 sum_{l odd < m} U_{m-l-1}(p)/l with U_r(+-1) = (+-1)^r (r+1).
    auto R = [p](int m) {
        double acc = 0.0;
        for (int l = 1; l < m; l += 2) {
            const int r = m - l - 1;
            const double ur = ((r % 2 == 0) ? 1.0 : p) * (r + 1);
            acc += ur / static_cast<double>(l);
        }
        return 4.0 * acc;
    };
    return 0.5 * (R(j + 1) - R(j - 1));
}

namespace detail {

void junction_basis_entries(const CanonicalRHProblem& problem, int junction_index, int i0,
                            int ic, std::vector<cplx>& entries) {
    const auto& J = problem.junctions[static_cast<size_t>(junction_index)];
    double p0 = 0.0;
    for (const auto& inc : J.incident)
        if (inc.comp == i0) p0 = inc.p;
    const double x_delta = p0 * (1.0 - 1e-6);
    const cplx zeta_delta = problem.components[static_cast<size_t>(i0)].map.inverse(x_delta);
    junction_basis_entries_probe(problem, junction_index, zeta_delta, i0, ic, entries);
}

void junction_basis_entries_probe(const CanonicalRHProblem& problem, int junction_index,
                                  cplx probe, int i0, int ic, std::vector<cplx>& entries) {
    const auto& J = problem.junctions[static_cast<size_t>(junction_index)];
    const auto& comp_ic = problem.components[static_cast<size_t>(ic)];
    const int n = comp_ic.degree;
    entries.assign(static_cast<size_t>(n), cplx(0.0));

    double p_ic = 0.0;
    bool incident = false;
    for (const auto& inc : J.incident)
        if (inc.comp == ic) {
            incident = true;
            p_ic = inc.p;
            break;
        }

    const cplx zstar = J.point;
    if (!incident) {
        const cplx w = comp_ic.map.apply(zstar);
        std::vector<cplx> c;
        cauchy_T_sweep(chart_point(w, Side::off), n, c);
        entries = c;
        return;
    }

    const cplx zeta_delta = probe;
    cplx w_delta, lambda_delta;
    if (ic == i0) {
        w_delta = cplx(comp_ic.map.apply(probe).real(), 0.0);
        lambda_delta = chart_point(w_delta, Side::minus).lambda;
    } else {
        w_delta = comp_ic.map.apply(zeta_delta);
        lambda_delta = chart_point(w_delta, Side::off).lambda;
    }
    const cplx lamhat_delta = (p_ic > 0) ? -0.5 * std::log(w_delta + 1.0)
                                         : 0.5 * std::log(w_delta - 1.0);
    const cplx ln_delta = 2.0 * p_ic * (lambda_delta - lamhat_delta);
    const cplx mprime = comp_ic.map.derivative(zstar);
    const cplx base = std::log(mprime) + std::log(zeta_delta - zstar);
    const double k = std::round((ln_delta - base).imag() / kTwoPi);
    const cplx ell_star = std::log(mprime) + cplx(0.0, kTwoPi * k);
    const cplx lamhat_star =
        (p_ic > 0) ? cplx(-0.5 * std::log(2.0), 0.0)
                   : cplx(0.5 * std::log(2.0),
                          (lamhat_delta.imag() >= 0.0) ? 0.5 * M_PI : -0.5 * M_PI);

    std::vector<double> trow;
    chebT_row(p_ic, n, trow);
    const cplx factor = p_ic * ell_star + 2.0 * lamhat_star;
    for (int j = 0; j < n; ++j)
        entries[static_cast<size_t>(j)] =
            kInv2PiI * (factor * trow[static_cast<size_t>(j)] + rho_poly(j, p_ic));
}

}  // namespace detail

Eigen::MatrixXcd cauchy_matrix_minus(const CanonicalRHProblem& problem) {
    if (problem.junctions.empty())
        throw contour_topology_error("cauchy_matrix_minus: problem not finalized");
    const int ntot = problem.total_degree();
    const int ncomp = static_cast<int>(problem.components.size());
    std::vector<int> offset(static_cast<size_t>(ncomp + 1), 0);
    for (int i = 0; i < ncomp; ++i)
        offset[static_cast<size_t>(i + 1)] = offset[static_cast<size_t>(i)] + problem.components[static_cast<size_t>(i)].degree;

    // Per-component M(infinity) correction rows, constant over rows.
    std::vector<std::vector<cplx>> corr(static_cast<size_t>(ncomp));
    for (int i = 0; i < ncomp; ++i) {
        const auto& comp = problem.components[static_cast<size_t>(i)];
        if (comp.map.is_affine()) {
            corr[static_cast<size_t>(i)].assign(static_cast<size_t>(comp.degree), cplx(0.0));
        } else {
            cauchy_T_sweep(chart_point(comp.map.map_infinity(), Side::off), comp.degree,
                           corr[static_cast<size_t>(i)]);
        }
    }

    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(ntot, ntot);
    std::vector<cplx> c;
    for (int i0 = 0; i0 < ncomp; ++i0) {
        const auto& comp0 = problem.components[static_cast<size_t>(i0)];
        const auto x = cheb::cheb_points(comp0.degree);
        for (int qi = 0; qi < comp0.degree; ++qi) {
            const int row = offset[static_cast<size_t>(i0)] + qi;
            const bool at_start = (qi == 0);
            const bool at_end = (qi == comp0.degree - 1);
            if (at_start || at_end) {
                const int jidx = at_start ? comp0.junction_at_start : comp0.junction_at_end;
                for (int ic = 0; ic < ncomp; ++ic) {
                    detail::junction_basis_entries(problem, jidx, i0, ic, c);
                    for (int j = 0; j < problem.components[static_cast<size_t>(ic)].degree; ++j)
                        C(row, offset[static_cast<size_t>(ic)] + j) =
                            c[static_cast<size_t>(j)] - corr[static_cast<size_t>(ic)][static_cast<size_t>(j)];
                }
            } else {
                const cplx zeta = comp0.map.inverse(x[static_cast<size_t>(qi)]);
                for (int ic = 0; ic < ncomp; ++ic) {
                    const auto& compc = problem.components[static_cast<size_t>(ic)];
                    if (ic == i0) {
                        cauchy_T_sweep(chart_point(cplx(x[static_cast<size_t>(qi)], 0.0), Side::minus),
                                       compc.degree, c);
                    } else {
                        const cplx w = compc.map.apply(zeta);
                        cauchy_T_sweep(chart_point(w, Side::off), compc.degree, c);
                    }
                    for (int j = 0; j < compc.degree; ++j)
                        C(row, offset[static_cast<size_t>(ic)] + j) =
                            c[static_cast<size_t>(j)] - corr[static_cast<size_t>(ic)][static_cast<size_t>(j)];
                }
            }
        }
    }
    return C;
}

}  // namespace hotw::cauchy
