#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hotw/cache.hpp"
#include "hotw/errors.hpp"
#include "hotw/model.hpp"
#include "hotw/rh_solver.hpp"

using namespace hotw;
using namespace hotw::rh;
using contour::CanonicalRHProblem;
using contour::ContourComponent;

namespace {

CanonicalRHProblem psi_contour_with_identity_jump() {
    // reuse the Psi^(2) contour shape, trivial jump
    model::ModelParams p;
    p.k = 1;
    p.t = {0.0, 0.0};
    auto prob = model::build_psi_problem(p);
    prob.jump = [](int, cplx) { return Mat2::identity(); };
    return prob;
}

}  // namespace

TEST_CASE("identity jump solves to U = 0, Psi = I") {
    auto prob = psi_contour_with_identity_jump();
    auto sol = solve_rh(prob, std::vector<int>(prob.components.size(), 8));
    for (const auto& b : sol.blocks)
        for (const auto& c : b.coeffs) CHECK(c.norm_max() < 1e-13);
    CHECK((evaluate_psi(sol, cplx(0.3, 0.2)) - Mat2::identity()).norm_max() < 1e-13);
    CHECK(sol.zero_sum_residual() < 1e-13);
}

TEST_CASE("triangular jump on the unit interval has the explicit solution") {
    // G = [[1, g],[0,1]] with analytic g: U12 = g, Psi_12 = C[g].
    auto g = [](cplx x) { return std::exp(x) * (1.0 - x) * (1.0 + x); };  // zero-sum at ends
    CanonicalRHProblem prob;
    prob.components = {ContourComponent::segment(-1.0, 1.0, 24)};
    prob.jump = [g](int, cplx z) { return Mat2(1.0, g(z), 0.0, 1.0); };
    prob.finalize();

    auto sol = solve_rh(prob, {24});
    CHECK(sol.zero_sum_residual() < 1e-10);

    // U is upper triangular and U12 interpolates g
    for (const auto& c : sol.blocks[0].coeffs) {
        CHECK(std::abs(c(0, 0)) < 1e-11);
        CHECK(std::abs(c(1, 0)) < 1e-11);
        CHECK(std::abs(c(1, 1)) < 1e-11);
    }
    const Mat2 u_mid = cheb::eval_series(sol.blocks[0], 0.31);
    CHECK(std::abs(u_mid(0, 1) - g(0.31)) < 1e-11);

    // Psi_12 = C[g] off the contour
    for (cplx zeta : {cplx(2.0, 1.0), cplx(0.1, -0.4), cplx(-3.0, 0.1)}) {
        cheb::ChebSeries<Mat2> gs;
        const auto xs = cheb::cheb_points(24);
        std::vector<cplx> gv(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) gv[i] = g(xs[i]);
        auto gc = cheb::vals_to_coeffs(gv);
        std::vector<cplx> cj;
        cauchy::cauchy_T_sweep(cauchy::chart_point(zeta, cauchy::Side::off), 24, cj);
        cplx want = 0.0;
        for (int j = 0; j < 24; ++j) want += gc.coeffs[j] * cj[j];
        const Mat2 psi = evaluate_psi(sol, zeta);
        CHECK(std::abs(psi(0, 1) - want) < 1e-10);
        CHECK(std::abs(psi(0, 0) - 1.0) < 1e-11);
    }
}

TEST_CASE("solved Psi satisfies the jump relation on the contour") {
    model::ModelParams p;
    p.k = 1;
    p.t = {0.0, 0.0};
    auto prob = model::build_psi_problem(p);
    auto sol = adaptive_solve(prob, 1e-12);
    CHECK(sol.achieved_tail < 1e-12);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        const int ci = trial % static_cast<int>(prob.components.size());
        const double x = u(rng);
        const cplx zeta = sol.problem.components[ci].map.inverse(x);
        const Mat2 plus = sol.evaluate(zeta, Side::plus, ci);
        const Mat2 minus = sol.evaluate(zeta, Side::minus, ci);
        const Mat2 res = plus - minus * sol.problem.jump(ci, zeta);
        CHECK(res.norm_max() < 1e-8);
    }

    // decay at infinity
    CHECK((sol.evaluate(cplx(1e6, 3e5)) - Mat2::identity()).norm_max() < 1e-5);

    // continuous-equation residual at off-collocation points
    for (int trial = 0; trial < 10; ++trial) {
        const int ci = trial % static_cast<int>(prob.components.size());
        const double x = u(rng) * 0.97;
        const cplx zeta = sol.problem.components[ci].map.inverse(x);
        const Mat2 g = sol.problem.jump(ci, zeta);
        const Mat2 uval = cheb::eval_series(sol.blocks[ci], x);
        Mat2 cminus = Mat2::zero();
        for (size_t i = 0; i < sol.problem.components.size(); ++i)
            cminus += cauchy::cauchy_component(sol.problem.components[i], sol.blocks[i], zeta,
                                               (static_cast<int>(i) == ci) ? Side::minus
                                                                            : Side::off);
        const Mat2 cplus = cminus + uval;
        const Mat2 res = cplus - cminus * g - (g - Mat2::identity());
        CHECK(res.norm_max() < 10.0 * std::max(sol.achieved_tail, 1e-13));
    }
}

TEST_CASE("spectral convergence on the Psi^(2) family") {
    model::ModelParams p;
    p.k = 1;
    p.t = {0.0, 0.0};
    auto prob = model::build_psi_problem(p);
    double prev = 1e300;
    std::vector<double> tails;
    for (int n : {8, 16, 32, 64, 128}) {
        auto sol = solve_rh(prob, std::vector<int>(prob.components.size(), n));
        tails.push_back(sol.tail_estimate());
    }
    // geometric decay until the rounding floor
    for (size_t i = 1; i < tails.size(); ++i)
        CHECK(tails[i] < std::max(0.5 * tails[i - 1], 1e-13));
    CHECK(tails.back() < 1e-12);
    prev = tails.back();
    CHECK(prev < 1e-12);  // degrees <= 128 suffice at tol 1e-12
}

TEST_CASE("adaptive_solve behavior") {
    auto prob = psi_contour_with_identity_jump();
    auto sol = adaptive_solve(prob, 1e-12);
    for (const auto& b : sol.blocks) CHECK(b.n() == 8);  // first iteration suffices
    CHECK(sol.achieved_tail < 1e-14);

    // discontinuous jump mid-component never resolves
    CanonicalRHProblem bad;
    bad.components = {ContourComponent::segment(-1.0, 1.0, 8)};
    bad.jump = [](int, cplx z) {
        return (z.real() < 0.33) ? Mat2(1.0, 1.0, 0.0, 1.0) : Mat2::identity();
    };
    bad.finalize();
    CHECK_THROWS_AS(adaptive_solve(bad, 1e-10, 8, 64), unresolved_error);
}

TEST_CASE("solution cache round trip") {
    auto g = [](cplx x) { return std::cos(x) * (1.0 - x * x); };
    CanonicalRHProblem prob;
    prob.components = {ContourComponent::segment(-1.0, 1.0, 20)};
    prob.jump = [g](int, cplx z) { return Mat2(1.0, g(z), 0.0, 1.0); };
    prob.finalize();
    auto sol = solve_rh(prob, {20});

    const std::string dir = "./cache_test_tmp";
    const std::string key = "roundtrip|test";
    REQUIRE(cachefile::save_solution(dir, key, sol));
    auto blocks = cachefile::load_blocks(dir, key);
    REQUIRE(blocks.has_value());
    auto sol2 = SpectralSolution::attach(prob, std::move(*blocks));
    for (size_t j = 0; j < sol.blocks[0].coeffs.size(); ++j)
        CHECK((sol.blocks[0].coeffs[j] - sol2.blocks[0].coeffs[j]).norm_max() == 0.0);
    const cplx zeta(0.7, 0.9);
    CHECK((sol.evaluate(zeta) - sol2.evaluate(zeta)).norm_max() == 0.0);

    CHECK(!cachefile::load_blocks(dir, "missing|key").has_value());
}
