#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hotw/cauchy.hpp"
#include "hotw/errors.hpp"
#include "support/quad_oracle.hpp"

using namespace hotw;
using namespace hotw::cauchy;
using contour::ContourComponent;
using contour::CanonicalRHProblem;

namespace {

double chebT(int j, double x) { return std::cos(j * std::acos(std::clamp(x, -1.0, 1.0))); }

cheb::ChebSeries<Mat2> unit_coeff(int n, int degree) {
    cheb::ChebSeries<Mat2> s;
    s.coeffs.assign(n, Mat2::zero());
    s.coeffs[degree] = Mat2::identity();
    return s;
}

}  // namespace

TEST_CASE("closed forms are oracle-certified at generic points") {
    // Every degree used below goes through the same seeded sweep; certify
    // j = 0..12 against adaptive quadrature before anything else relies on it.
    const std::vector<cplx> pts = {{2.0, 1.0}, {-3.0, 0.5},  {0.1, 2.0},
                                   {10.0, 0.0}, {-0.7, 1e-3}, {0.45, -0.2},
                                   {0.0, 1e-4}, {1.4, 1e-6}};
    for (cplx z : pts) {
        for (int j = 0; j <= 12; ++j) {
            auto tj = [j](cplx t) {
                cplx t0 = 1.0, t1 = t;
                if (j == 0) return t0;
                for (int m = 2; m <= j; ++m) {
                    cplx t2 = 2.0 * t * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                }
                return t1;
            };
            auto integrand = [&](double t) { return tj(cplx(t, 0.0)) / (cplx(t, 0.0) - z); };
            const cplx want = oracle::integrate(integrand, -1.0, 1.0, 1e-14) / cplx(0.0, 2.0 * M_PI);
            const cplx got = cauchy_T(j, z, Side::off);
            CHECK(std::abs(got - want) < 1e-12);
        }
    }
}

TEST_CASE("cauchy_T spec values") {
    // Plemelj jump of T_0 at 0
    const cplx jump0 = cauchy_T(0, 0.0, Side::plus) - cauchy_T(0, 0.0, Side::minus);
    CHECK(std::abs(jump0 - 1.0) < 1e-14);

    // Plemelj jump of T_3 at 0.4 equals T_3(0.4) = -0.944
    const cplx jump3 = cauchy_T(3, 0.4, Side::plus) - cauchy_T(3, 0.4, Side::minus);
    CHECK(std::abs(jump3 - cplx(-0.944)) < 1e-13);

    // j=0 at z=10: (1/2 pi i) log(9/11)
    const cplx v = cauchy_T(0, 10.0, Side::off);
    const cplx want = std::log(9.0 / 11.0) / cplx(0.0, 2.0 * M_PI);
    CHECK(std::abs(v - want) < 1e-14);

    CHECK_THROWS_AS(cauchy_T(2, cplx(5.0, 0.0), Side::plus), std::invalid_argument);
}

TEST_CASE("Plemelj identity across degrees and points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int c = 0; c < 20; ++c) {
        const double x = u(rng);
        for (int j = 0; j <= 12; ++j) {
            const cplx d = cauchy_T(j, x, Side::plus) - cauchy_T(j, x, Side::minus);
            CHECK(std::abs(d - chebT(j, x)) < 1e-12);
        }
    }
}

TEST_CASE("decay along a log-spaced ray") {
    for (int j : {0, 1, 4, 9}) {
        for (double r : {10.0, 100.0, 1000.0, 1e5}) {
            const cplx z = r * std::exp(cplx(0.0, 0.7));
            CHECK(std::abs(cauchy_T(j, z, Side::off)) < 2.0 / r);
        }
    }
}

TEST_CASE("off-contour values are analytic (Cauchy-Riemann probe)") {
    const double h = 1e-6;
    for (cplx z : {cplx(0.3, 0.8), cplx(-1.8, 0.1), cplx(0.9, -0.4)}) {
        for (int j : {0, 2, 7}) {
            const cplx dx = (cauchy_T(j, z + h, Side::off) - cauchy_T(j, z - h, Side::off)) / (2 * h);
            const cplx dy = (cauchy_T(j, z + cplx(0, h), Side::off) -
                             cauchy_T(j, z - cplx(0, h), Side::off)) /
                            cplx(0, 2 * h);
            CHECK(std::abs(dx - dy) < 1e-7);
        }
    }
}

TEST_CASE("branch cut lies on the interval and nowhere else") {
    // Im parts of C+ and C- of T_0 differ by exactly 1 across the cut.
    const cplx diff = cauchy_T(0, 0.2, Side::plus) - cauchy_T(0, 0.2, Side::minus);
    CHECK(std::abs(diff.real() - 1.0) < 1e-14);
    // No jump when walking around the |z| = 2 circle.
    cplx prev = cauchy_T(0, 2.0 * std::exp(cplx(0.0, 0.0)), Side::off);
    for (int s = 1; s <= 64; ++s) {
        const cplx z = 2.0 * std::exp(cplx(0.0, 2.0 * M_PI * s / 64.0));
        const cplx cur = cauchy_T(0, z, Side::off);
        CHECK(std::abs(cur - prev) < 0.05);
        prev = cur;
    }
}

TEST_CASE("cauchy_component on the unit interval") {
    auto comp = ContourComponent::segment(-1.0, 1.0, 8);

    // zero series
    cheb::ChebSeries<Mat2> zero;
    zero.coeffs.assign(8, Mat2::zero());
    CHECK(cauchy_component(comp, zero, cplx(2.0, 1.0), Side::off).norm_max() == 0.0);

    // T_0 coefficient I at zeta = 10 reduces to cauchy_T
    auto s0 = unit_coeff(8, 0);
    const Mat2 got = cauchy_component(comp, s0, 10.0, Side::off);
    const cplx want = cauchy_T(0, 10.0, Side::off);
    CHECK(std::abs(got(0, 0) - want) < 1e-14);
    CHECK(std::abs(got(1, 1) - want) < 1e-14);
    CHECK(std::abs(got(0, 1)) == 0.0);
}

TEST_CASE("cauchy_component over a quarter-circle arc vs curve oracle") {
    const cplx z0 = 1.0, z1 = cplx(0.0, 1.0);
    const cplx zm = std::exp(cplx(0.0, M_PI / 4.0));
    auto comp = ContourComponent::circular_arc(z0, zm, z1, 12);
    auto s1 = unit_coeff(12, 1);

    auto gamma = [](double t) { return std::exp(cplx(0.0, t)); };
    auto dgamma = [](double t) { return cplx(0.0, 1.0) * std::exp(cplx(0.0, t)); };
    for (cplx zeta : {cplx(0.0, 0.0), cplx(0.3, 0.1), cplx(2.0, 2.0)}) {
        auto f = [&](cplx t) { return comp.map.apply(t); };  // T_1 o M
        const cplx want = oracle::cauchy_over_curve(gamma, dgamma, f, 0.0, M_PI / 2.0, zeta, 1e-14);
        const Mat2 got = cauchy_component(comp, s1, zeta, Side::off);
        CHECK(std::abs(got(0, 0) - want) < 1e-10);
    }
}

TEST_CASE("arc transform decays at infinity (M(inf) correction works)") {
    const cplx zm = std::exp(cplx(0.0, M_PI / 4.0));
    auto comp = ContourComponent::circular_arc(1.0, zm, cplx(0.0, 1.0), 10);
    auto s = unit_coeff(10, 2);
    for (double r : {10.0, 1e3, 1e6}) {
        const cplx zeta = r * std::exp(cplx(0.0, -2.0));
        CHECK(cauchy_component(comp, s, zeta, Side::off).norm_max() < 2.0 / r);
    }
}

TEST_CASE("cauchy_component_deriv") {
    auto comp = ContourComponent::segment(-1.0, 1.0, 10);
    cheb::ChebSeries<Mat2> zero;
    zero.coeffs.assign(10, Mat2::zero());
    CHECK(cauchy_component_deriv(comp, zero, cplx(3.0, 1.0)).norm_max() == 0.0);

    // d/dz (1/2 pi i) log((z-1)/(z+1)) at z=5 is (1/2 pi i)(1/4 - 1/6)
    auto s0 = unit_coeff(10, 0);
    const Mat2 d = cauchy_component_deriv(comp, s0, 5.0);
    const cplx want = cplx(0.25 - 1.0 / 6.0) / cplx(0.0, 2.0 * M_PI);
    CHECK(std::abs(d(0, 0) - want) < 1e-14);

    // finite differences on a generic series at zeta = 3
    cheb::ChebSeries<Mat2> s;
    s.coeffs.assign(10, Mat2::zero());
    for (int j = 0; j < 10; ++j)
        s.coeffs[j] = Mat2(std::pow(0.5, j), cplx(0.0, 0.1 * j), 0.3, 1.0 / (j + 1.0));
    const double h = 1e-5;
    const Mat2 fd = (cauchy_component(comp, s, 3.0 + h, Side::off) -
                     cauchy_component(comp, s, 3.0 - h, Side::off)) *
                    (1.0 / (2.0 * h));
    const Mat2 an = cauchy_component_deriv(comp, s, 3.0);
    CHECK((fd - an).norm_max() < 1e-8);

    CHECK_THROWS_AS(cauchy_component_deriv(comp, s, cplx(0.5, 0.0)), std::invalid_argument);
}

TEST_CASE("near-contour evaluation keeps digits") {
    auto comp = ContourComponent::segment(-1.0, 1.0, 12);
    cheb::ChebSeries<Mat2> s;
    s.coeffs.assign(12, Mat2::zero());
    for (int j = 0; j < 12; ++j) s.coeffs[j] = Mat2(std::pow(0.3, j), 0.0, 0.0, 1.0);
    // 1e-9 off the contour: compare against the one-sided value
    const Mat2 near = cauchy_component(comp, s, cplx(0.25, 1e-9), Side::off);
    const Mat2 lim = cauchy_component(comp, s, cplx(0.25, 0.0), Side::plus);
    CHECK((near - lim).norm_max() < 1e-8);
}

TEST_CASE("cauchy_matrix_minus single component reduces to cauchy_T rows") {
    CanonicalRHProblem prob;
    prob.components = {ContourComponent::segment(-1.0, 1.0, 9)};
    prob.jump = [](int, cplx) { return Mat2::identity(); };
    prob.finalize();
    const auto C = cauchy_matrix_minus(prob);
    const auto x = cheb::cheb_points(9);
    // interior rows against direct minus-side values
    for (int q = 1; q < 8; ++q)
        for (int j = 0; j < 9; ++j)
            CHECK(std::abs(C(q, j) - cauchy_T(j, x[q], Side::minus)) < 1e-13);
}

TEST_CASE("interior row matches deformed-quadrature oracle at x=0.5") {
    CanonicalRHProblem prob;
    prob.components = {ContourComponent::segment(-1.0, 1.0, 9)};
    prob.jump = [](int, cplx) { return Mat2::identity(); };
    prob.finalize();
    const auto C = cauchy_matrix_minus(prob);
    const auto x = cheb::cheb_points(9);
    int q = -1;
    for (int i = 0; i < 9; ++i)
        if (std::abs(x[i] - 0.5) < 0.2) q = i;  // nearest grid point to 0.5
    REQUIRE(q > 0);
    for (int j = 0; j < 6; ++j) {
        const cplx want = oracle::cauchy_T_minus_limit(j, x[q]);
        CHECK(std::abs(C(q, j) - want) < 1e-10);
    }
}

TEST_CASE("two rays meeting at 0: endpoint rows finite and consistent") {
    // Split of the interval [-1,1] at 0 into two chart components. For any
    // density continuous at 0 the zero-sum condition holds automatically, and
    // the regularized junction rows must reproduce the single-interval
    // minus-side value at the interior point 0.
    CanonicalRHProblem split;
    split.components = {ContourComponent::segment(-1.0, 0.0, 17),
                        ContourComponent::segment(0.0, 1.0, 17)};
    split.jump = [](int, cplx) { return Mat2::identity(); };
    split.finalize();
    REQUIRE(split.junctions.size() == 3);
    const auto C = cauchy_matrix_minus(split);
    for (int r = 0; r < C.rows(); ++r)
        for (int c = 0; c < C.cols(); ++c) CHECK(std::isfinite(std::abs(C(r, c))));

    auto f = [](double t) { return std::exp(t) * std::cos(0.5 * t); };
    // coefficients of f on each half
    auto coeffs_on = [&](const ContourComponent& comp) {
        const auto xs = cheb::cheb_points(comp.degree);
        std::vector<cplx> v(xs.size());
        for (size_t i = 0; i < xs.size(); ++i)
            v[i] = f(comp.map.inverse(xs[i]).real());
        return cheb::vals_to_coeffs(v);
    };
    const auto u0 = coeffs_on(split.components[0]);
    const auto u1 = coeffs_on(split.components[1]);

    // row of the first component's end point (the junction at 0)
    const int row_at_junction = 16;  // last grid point of component 0
    cplx got = 0.0;
    for (int j = 0; j < 17; ++j) {
        got += C(row_at_junction, j) * u0.coeffs[j];
        got += C(row_at_junction, 17 + j) * u1.coeffs[j];
    }

    // reference: single-interval minus-side value at the interior point 0
    const auto xs = cheb::cheb_points(33);
    std::vector<cplx> v(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
    const auto u = cheb::vals_to_coeffs(v);
    cplx want = 0.0;
    std::vector<cplx> c;
    cauchy_T_sweep(chart_point(cplx(0.0, 0.0), Side::minus), 33, c);
    for (int j = 0; j < 33; ++j) want += c[j] * u.coeffs[j];

    CHECK(std::abs(got - want) < 1e-11);
}

TEST_CASE("angled junction rows stay finite") {
    // genuine corner: two rays at 120 degrees
    const cplx dir = std::exp(cplx(0.0, 2.0 * M_PI / 3.0));
    CanonicalRHProblem prob;
    prob.components = {ContourComponent::segment(dir, 0.0, 11),
                       ContourComponent::segment(0.0, 1.0, 11)};
    prob.jump = [](int, cplx) { return Mat2::identity(); };
    prob.finalize();
    const auto C = cauchy_matrix_minus(prob);
    for (int r = 0; r < C.rows(); ++r)
        for (int c = 0; c < C.cols(); ++c) CHECK(std::isfinite(std::abs(C(r, c))));
}

TEST_CASE("junction topology validation") {
    CanonicalRHProblem bad;
    bad.components = {ContourComponent::segment(-1.0, 1.0, 8)};
    bad.components[0].start = cplx(-2.0, 0.0);  // chart no longer matches
    bad.jump = [](int, cplx) { return Mat2::identity(); };
    CHECK_THROWS_AS(bad.finalize(), contour_topology_error);
}
