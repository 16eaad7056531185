#include "hotw/rh_solver.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hotw::rh {

namespace {

using cauchy::chart_point;
using cauchy::cauchy_T_sweep;

struct Offsets {
    std::vector<int> off;
    int total = 0;
};

Offsets offsets_of(const CanonicalRHProblem& p) {
    Offsets o;
    o.off.resize(p.components.size() + 1, 0);
    for (size_t i = 0; i < p.components.size(); ++i)
        o.off[i + 1] = o.off[i] + p.components[i].degree;
    o.total = o.off.back();
    return o;
}

// Zero-sum constraint rows for the shared system matrix, one per
// (junction, matrix column c), ordered deterministically.
std::vector<Eigen::RowVectorXcd> zero_sum_rows(const CanonicalRHProblem& p, const Offsets& o) {
    std::vector<Eigen::RowVectorXcd> rows;
    for (const auto& J : p.junctions) {
        for (int c = 0; c < 2; ++c) {
            Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(2 * o.total);
            for (const auto& inc : J.incident) {
                const int n = p.components[static_cast<size_t>(inc.comp)].degree;
                double tj = 1.0;  // T_j(p) = p^j
                for (int j = 0; j < n; ++j) {
                    r(2 * (o.off[static_cast<size_t>(inc.comp)] + j) + c) += inc.p * tj;
                    tj *= inc.p;
                }
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace

double SpectralSolution::tail_estimate() const {
    double t = 0.0;
    for (const auto& b : blocks) t = std::max(t, cheb::tail_estimate(b));
    return t;
}

double SpectralSolution::zero_sum_residual() const {
    double r = 0.0;
    for (const auto& J : problem.junctions) {
        Mat2 acc = Mat2::zero();
        for (const auto& inc : J.incident)
            acc += inc.p * cheb::eval_series(blocks[static_cast<size_t>(inc.comp)], inc.p);
        r = std::max(r, acc.norm_max());
    }
    return r;
}

namespace {
// The side tag applies to a component only when zeta actually lies on its
// open chart interval.
bool on_component_cut(const contour::ContourComponent& comp, cplx zeta) {
    const cplx w = comp.map.apply(zeta);
    return std::abs(w.imag()) < 1e-12 * (1.0 + std::abs(w)) && std::abs(w.real()) < 1.0;
}
}  // namespace

Mat2 SpectralSolution::evaluate(cplx zeta, Side side, int comp_hint) const {
    Mat2 acc = Mat2::identity();
    for (size_t i = 0; i < problem.components.size(); ++i) {
        Side s = Side::off;
        if (side != Side::off && (comp_hint < 0 || static_cast<int>(i) == comp_hint) &&
            on_component_cut(problem.components[i], zeta))
            s = side;
        acc += cauchy::cauchy_component_nocorr(problem.components[i], blocks[i], zeta, s) -
               corrections_[i];
    }
    return acc;
}

Mat2 SpectralSolution::evaluate_at_junction(int junction_index, cplx probe) const {
    Mat2 acc = Mat2::identity();
    std::vector<cplx> entries;
    for (size_t i = 0; i < problem.components.size(); ++i) {
        cauchy::detail::junction_basis_entries_probe(problem, junction_index, probe, -1,
                                                     static_cast<int>(i), entries);
        Mat2 term = Mat2::zero();
        for (int j = 0; j < blocks[i].n(); ++j)
            term += blocks[i].coeffs[static_cast<size_t>(j)] * entries[static_cast<size_t>(j)];
        acc += term - corrections_[i];
    }
    return acc;
}

Mat2 SpectralSolution::evaluate_deriv(cplx zeta, Side side, int comp_hint) const {
    Mat2 acc = Mat2::zero();
    for (size_t i = 0; i < problem.components.size(); ++i) {
        Side s = Side::off;
        if (side != Side::off && (comp_hint < 0 || static_cast<int>(i) == comp_hint) &&
            on_component_cut(problem.components[i], zeta))
            s = side;
        acc += cauchy::cauchy_component_deriv_side(problem.components[i], blocks[i], zeta, s);
    }
    return acc;
}

SpectralSolution SpectralSolution::attach(CanonicalRHProblem problem,
                                          std::vector<cheb::ChebSeries<Mat2>> blocks) {
    if (blocks.size() != problem.components.size())
        throw std::invalid_argument("attach: one coefficient block per component required");
    for (size_t i = 0; i < blocks.size(); ++i)
        problem.components[i].degree = blocks[i].n();
    problem.finalize();
    SpectralSolution sol;
    sol.problem = std::move(problem);
    sol.blocks = std::move(blocks);
    sol.achieved_tail = sol.tail_estimate();
    sol.corrections_.assign(sol.problem.components.size(), Mat2::zero());
    for (size_t i = 0; i < sol.problem.components.size(); ++i)
        sol.corrections_[i] =
            cauchy::component_infinity_correction(sol.problem.components[i], sol.blocks[i]);
    return sol;
}

Mat2 evaluate_psi(const SpectralSolution& sol, cplx zeta, Side side, int comp_hint) {
    return sol.evaluate(zeta, side, comp_hint);
}

SpectralSolution solve_rh(const CanonicalRHProblem& problem_in, const std::vector<int>& degrees) {
    CanonicalRHProblem problem = problem_in;
    if (degrees.size() != problem.components.size())
        throw std::invalid_argument("solve_rh: one degree per component required");
    for (size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 4) throw std::invalid_argument("solve_rh: degrees must be >= 4");
        problem.components[i].degree = degrees[i];
    }
    problem.finalize();

    const Offsets o = offsets_of(problem);
    const int N = o.total;

    // Jump values at all collocation points; validates det G != 0.
    std::vector<Mat2> G(static_cast<size_t>(N));
    for (size_t i = 0; i < problem.components.size(); ++i) {
        const auto pts = problem.components[i].collocation_points();
        for (int q = 0; q < problem.components[i].degree; ++q) {
            Mat2 g = problem.jump(static_cast<int>(i), pts[static_cast<size_t>(q)]);
            if (!(std::abs(g.det()) > 1e-12))
                throw std::invalid_argument("solve_rh: jump matrix singular at a collocation point");
            G[static_cast<size_t>(o.off[i] + q)] = g;
        }
    }

    const Eigen::MatrixXcd E = cauchy::values_matrix(problem);
    const Eigen::MatrixXcd C = cauchy::cauchy_matrix_minus(problem);

    // Rows of U decouple: one shared matrix, one RHS per matrix row r.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * N, 2);
    for (int p = 0; p < N; ++p) {
        const Mat2& g = G[static_cast<size_t>(p)];
        const Mat2 img(1.0 - g.a[0], -g.a[1], -g.a[2], 1.0 - g.a[3]);  // I - G
        for (int c = 0; c < 2; ++c) {
            const int row = 2 * p + c;
            for (int j = 0; j < N; ++j) {
                A(row, 2 * j + c) += E(p, j);
                A(row, 2 * j + 0) += C(p, j) * img(0, c);
                A(row, 2 * j + 1) += C(p, j) * img(1, c);
            }
            for (int r = 0; r < 2; ++r)
                rhs(row, r) = g(r, c) - ((r == c) ? 1.0 : 0.0);
        }
    }

    auto extract = [&](const Eigen::MatrixXcd& X, SpectralSolution& sol) {
        sol.blocks.assign(problem.components.size(), {});
        for (size_t i = 0; i < problem.components.size(); ++i) {
            const int n = problem.components[i].degree;
            sol.blocks[i].coeffs.resize(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) {
                Mat2 m;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) m(r, c) = X(2 * (o.off[i] + j) + c, r);
                sol.blocks[i].coeffs[static_cast<size_t>(j)] = m;
            }
        }
    };

    SpectralSolution sol;
    sol.problem = problem;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Eigen::MatrixXcd X = lu.solve(rhs);
    extract(X, sol);

    const double scale = A.cwiseAbs().maxCoeff();
    const double res = (A * X - rhs).cwiseAbs().maxCoeff() / std::max(scale, 1.0);
    double zres = sol.zero_sum_residual();
    const double usize = [&] {
        double m = 0.0;
        for (const auto& b : sol.blocks)
            for (const auto& u : b.coeffs) m = std::max(m, u.norm_max());
        return m;
    }();

    if (res > 1e-9 || zres > 1e-8 * std::max(1.0, usize)) {
        // Suspected rank deficiency: find the most dependent rows from a
        // column-pivoted QR of A^T and replace them with zero-sum rows.
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A.transpose());
        const auto& R = qr.matrixR();
        const double rmax = std::abs(R(0, 0));
        std::vector<int> dependent;
        for (int idx = 2 * N - 1; idx >= 0; --idx) {
            if (std::abs(R(idx, idx)) < 1e-10 * rmax)
                dependent.push_back(qr.colsPermutation().indices()(idx));
            else
                break;
        }
        if (!dependent.empty()) {
            const auto zrows = zero_sum_rows(problem, o);
            if (dependent.size() > zrows.size())
                throw no_solution_error("solve_rh: more dependent rows than zero-sum constraints");
            for (size_t m = 0; m < dependent.size(); ++m) {
                A.row(dependent[m]) = zrows[m];
                rhs(dependent[m], 0) = 0.0;
                rhs(dependent[m], 1) = 0.0;
            }
            lu.compute(A);
            X = lu.solve(rhs);
            const double res2 = (A * X - rhs).cwiseAbs().maxCoeff() / std::max(scale, 1.0);
            if (res2 > 1e-7)
                throw no_solution_error("solve_rh: system singular after zero-sum repair");
            extract(X, sol);
            sol.rank_repaired = true;
            zres = sol.zero_sum_residual();
        }
    }

    sol.achieved_tail = sol.tail_estimate();
    sol.corrections_.assign(problem.components.size(), Mat2::zero());
    for (size_t i = 0; i < problem.components.size(); ++i)
        sol.corrections_[i] =
            cauchy::component_infinity_correction(problem.components[i], sol.blocks[i]);
    return sol;
}

SpectralSolution adaptive_solve(const CanonicalRHProblem& problem, double tol, int start_degree,
                                int cap) {
    if (tol < 1e-13) throw std::invalid_argument("adaptive_solve: tol below 1e-13");
    int n = start_degree;
    SpectralSolution best;
    double best_tail = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> degrees(problem.components.size(), n);
        SpectralSolution sol = solve_rh(problem, degrees);
        const double t = sol.achieved_tail;
        if (t < best_tail) {
            best_tail = t;
            best = std::move(sol);
        }
        if (best_tail < tol) return best;
        if (n >= cap)
            throw adaptive_unresolved("adaptive_solve: degree cap reached before tolerance",
                                      best_tail, std::move(best));
        n *= 2;
    }
}

}  // namespace hotw::rh
