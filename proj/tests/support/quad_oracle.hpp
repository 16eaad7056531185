#pragma once

#include <complex>
#include <functional>

// Brute-force quadrature oracles used to certify closed forms. Kept apart
// from the library on purpose: nothing here touches the production Cauchy
// transform code paths.
namespace oracle {

using cplx = std::complex<double>;

// Adaptive Simpson for a complex integrand on [a, b].
cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-13);

// (1/2 pi i) \int_curve f(t) / (t - z) dt over gamma : [a,b] -> C.
cplx cauchy_over_curve(const std::function<cplx(double)>& gamma,
                       const std::function<cplx(double)>& dgamma,
                       const std::function<cplx(cplx)>& f, double a, double b, cplx z,
                       double tol = 1e-13);

// Minus-side boundary value of the Cauchy transform of T_j over (-1,1) at
// x, by quadrature at x - i*eps and Richardson extrapolation in eps.
cplx cauchy_T_minus_limit(int j, double x);

}  // namespace oracle
