#pragma once

#include <vector>

#include "hotw/fredholm.hpp"
#include "hotw/model.hpp"

namespace hotw::asymptotics {

// Coefficients of the s -> -infinity expansion of log det(I - K_s) at t = 0:
// A_s = -c1(k) |s|^{4k+3} - ((2k+1)/8) log|s|.
struct GapExpansion {
    int k = 0;
    double leading_coeff() const;            // c1(k)
    double log_coeff() const { return (2.0 * k + 1.0) / 8.0; }
};

double A(double s, int k);        // requires s < 0
double A_deriv(double s, int k);  // dA/ds

// chi^(k) estimation following the integrated-derivative construction:
// chi = lim ( log F(M) - int_s^M d/ds log det - A(s) ).
struct ChiEstimate {
    int k = 0;
    double chi = 0.0;              // extrapolated over the deepest grid section
    double chi_plateau = 0.0;      // median of the three deepest curve values
    double fitted_exponent = 0.0;  // measured residual exponent of the fit
    std::vector<double> s_grid;    // panel boundaries (descending toward s_deep)
    std::vector<double> chi_curve; // chi(s) at the boundaries
    std::vector<double> point_err; // per-point derivative error estimates

    // error heuristics tracked through the pipeline
    double err_solver_tail = 0.0;  // Psi coefficient tail
    double err_det_cauchy = 0.0;   // determinant Cauchy error at M
    double err_deriv_points = 0.0; // worst per-point derivative estimate
    double err_fit_tail = 0.0;     // worst piecewise-Chebyshev panel tail
    bool converged = false;
};

ChiEstimate estimate_chi(const model::KernelEvaluator& ev, double M, double s_deep, double tol);

// Least-squares slope of log|chi_curve - chi| against log|s| over the grid
// window; floor-dominated points (residual below the noise estimate) are
// dropped and flagged.
double residual_exponent(const ChiEstimate& est, double s_min, double s_max,
                         bool* floor_warning = nullptr);

// Two-parameter fit of log(1 - F) ~ -c s^p on a right-tail grid.
struct TailFit {
    double p = 0.0;
    double c = 0.0;
    int points_used = 0;
    bool floor_warning = false;
};

TailFit tail_fit(const model::KernelEvaluator& ev, const std::vector<double>& s_grid, double tol);
TailFit tail_fit_data(const std::vector<double>& s, const std::vector<double>& one_minus_F);

// Plain least-squares slope helper shared by the fits.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hotw::asymptotics
