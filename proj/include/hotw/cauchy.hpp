#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hotw/chebyshev.hpp"
#include "hotw/contour.hpp"
#include "hotw/mat2.hpp"

namespace hotw::cauchy {

using contour::CanonicalRHProblem;
using contour::ContourComponent;

enum class Side { plus, minus, off };

// Branch-resolved data at one chart coordinate. psi is the inverse Joukowski
// image w - sqrt(w-1)sqrt(w+1) (|psi| <= 1), lambda = (1/2)(Log(w-1) -
// Log(w+1)); on the cut both carry the one-sided limits, the plus side being
// the limit from the upper half plane.
struct ChartPoint {
    cplx w;
    Side side = Side::off;
    cplx psi;
    cplx lambda;
    cplx sqrt_prod;  // sqrt(w-1) sqrt(w+1)
};

ChartPoint chart_point(cplx w, Side side);

// C[T_j](w) = (1/2 pi i) int_{-1}^{1} T_j(t)/(t - w) dt for j = 0..count-1,
// evaluated by a downward/upward sweep that stays stable at any chart point
// away from the endpoints +-1. Optionally fills d/dw values.
void cauchy_T_sweep(const ChartPoint& p, int count, std::vector<cplx>& out,
                    std::vector<cplx>* dout = nullptr);

// Single transform value; convenience wrapper over the sweep.
cplx cauchy_T(int j, cplx z, Side side);

// Cauchy transform over one component of the mapped series at zeta. Bounded
// components subtract the value at M(infinity) so the transform decays at
// infinity.
Mat2 cauchy_component(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                      cplx zeta, Side side);

// Same without the M(infinity) subtraction; callers that evaluate the same
// series many times cache component_infinity_correction themselves.
Mat2 cauchy_component_nocorr(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                             cplx zeta, Side side);
Mat2 component_infinity_correction(const ContourComponent& comp,
                                   const cheb::ChebSeries<Mat2>& series);

// d/dzeta of cauchy_component at a point strictly off the component.
Mat2 cauchy_component_deriv(const ContourComponent& comp, const cheb::ChebSeries<Mat2>& series,
                            cplx zeta);

// One-sided d/dzeta boundary value on the component interior.
Mat2 cauchy_component_deriv_side(const ContourComponent& comp,
                                 const cheb::ChebSeries<Mat2>& series, cplx zeta, Side side);

// Values of T_j at the mapped grid: block diagonal interpolation matrix E
// with (row, col) = (collocation point, basis coefficient).
Eigen::MatrixXcd values_matrix(const CanonicalRHProblem& problem);

// Minus-side boundary-value matrix C^- on stacked Chebyshev coefficients.
// Rows at junction points carry the regularized finite limits: the common
// log(zeta - zeta*) singularities across incident components are dropped
// (they cancel for any zero-sum U), the remaining branch-resolved constants
// are assembled analytically.
Eigen::MatrixXcd cauchy_matrix_minus(const CanonicalRHProblem& problem);

// Value of T_j at +-1 specific polynomial combination used by junction rows:
// rho_j(p) is the polynomial part of int T_j(t)/(t-w) dt at w = p.
double rho_poly(int j, double p);

namespace detail {
// Regularized junction-row entries for the basis of component `ic`, as seen
// from a row collocated at `junction` approached along component `i0` on the
// minus side. Fills entries[j] for j < components[ic].degree, WITHOUT the
// M(infinity) correction (callers subtract the per-component correction row).
void junction_basis_entries(const CanonicalRHProblem& problem, int junction_index, int i0,
                            int ic, std::vector<cplx>& entries);

// Same limit taken along an off-contour path through `probe` (used to
// evaluate a zero-sum solution at a junction from a chosen sector).
void junction_basis_entries_probe(const CanonicalRHProblem& problem, int junction_index,
                                  cplx probe, int i0, int ic, std::vector<cplx>& entries);
}  // namespace detail

}  // namespace hotw::cauchy
