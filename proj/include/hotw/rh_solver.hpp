#pragma once

#include <vector>

#include "hotw/cauchy.hpp"
#include "hotw/chebyshev.hpp"
#include "hotw/contour.hpp"
#include "hotw/errors.hpp"

namespace hotw::rh {

using cauchy::Side;
using contour::CanonicalRHProblem;

// Solved collocation discretization of Psi_+ = Psi_- G: per-component
// Chebyshev coefficient blocks of the density U with Psi = I + C_Gamma U.
// Immutable after construction; safe to share across threads.
struct SpectralSolution {
    CanonicalRHProblem problem;
    std::vector<cheb::ChebSeries<Mat2>> blocks;
    double achieved_tail = 0.0;
    bool rank_repaired = false;

    double tail_estimate() const;
    // Max junction violation of sum_i p_i U^{Omega_i}(zeta*).
    double zero_sum_residual() const;

    // Psi(zeta). side applies to the component containing zeta (hint
    // optional; -1 resolves it from the geometry).
    Mat2 evaluate(cplx zeta, Side side = Side::off, int comp_hint = -1) const;
    // d/dzeta Psi(zeta); one-sided on the contour when a side is given.
    Mat2 evaluate_deriv(cplx zeta, Side side = Side::off, int comp_hint = -1) const;
    // Sector limit of Psi at a junction point, approached through `probe`.
    // Valid because the solution satisfies the zero-sum condition.
    Mat2 evaluate_at_junction(int junction_index, cplx probe) const;

    // Rebuild a solution from cached coefficient blocks.
    static SpectralSolution attach(CanonicalRHProblem problem,
                                   std::vector<cheb::ChebSeries<Mat2>> blocks);

private:
    friend SpectralSolution solve_rh(const CanonicalRHProblem&, const std::vector<int>&);
    std::vector<Mat2> corrections_;  // cached per-component M(inf) terms
};

// Thrown by adaptive_solve when the degree cap is reached; carries the best
// solution together with its coefficient-tail estimate.
class adaptive_unresolved : public unresolved_error {
public:
    adaptive_unresolved(const std::string& msg, double achieved, SpectralSolution best_)
        : unresolved_error(msg, achieved), best(std::move(best_)) {}
    SpectralSolution best;
};

// Solve L_n U = G_n - I at the given per-component degrees. Rank-deficient
// systems are repaired by replacing the most dependent rows with explicit
// zero-sum constraint rows.
SpectralSolution solve_rh(const CanonicalRHProblem& problem, const std::vector<int>& degrees);

Mat2 evaluate_psi(const SpectralSolution& sol, cplx zeta, Side side = Side::off,
                  int comp_hint = -1);

// Double all degrees (start 8, cap 512) until the coefficient tail drops
// below tol.
SpectralSolution adaptive_solve(const CanonicalRHProblem& problem, double tol,
                                int start_degree = 8, int cap = 512);

}  // namespace hotw::rh
