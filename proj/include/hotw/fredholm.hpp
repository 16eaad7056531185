#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "hotw/errors.hpp"
#include "hotw/model.hpp"

namespace hotw::fredholm {

// Gauss-Legendre rule on (-1, 1); weights sum to 2.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int m);

// One distribution value with its provenance.
struct DetResult {
    double s = 0.0;
    double F = 1.0;
    double logF = 0.0;
    double density = std::numeric_limits<double>::quiet_NaN();
    int m_used = 0;
    double b = 0.0;                // truncation point of (s, infinity)
    double err_est = 0.0;          // Cauchy difference under m doubling
};

class det_unresolved : public unresolved_error {
public:
    det_unresolved(const std::string& msg, DetResult best_)
        : unresolved_error(msg, best_.err_est), best(best_) {}
    DetResult best;
};

// det(I - sqrt(w_i) K(x_i, x_j) sqrt(w_j)) on (a, b) with an m-point mapped
// rule. The inner elimination runs in extended precision.
double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b,
                    int m);
double fredholm_log_det(const std::function<double(double, double)>& kernel, double a, double b,
                        int m);

// F_k(s) = det(I - K_s) with automatic truncation and m doubling.
DetResult distribution_F(const model::KernelEvaluator& ev, double s, double tol,
                         int m_cap = 640);

// d/ds log det(I - K_s) via the resolvent diagonal ((I-K)^{-1} K)(s, s).
// err_out, when given, receives the m-doubling Cauchy difference.
double log_deriv(const model::KernelEvaluator& ev, double s, double tol, int m_cap = 640,
                 double* err_out = nullptr);

// F'(s) = F(s) * d/ds log det(I - K_s).
DetResult density(const model::KernelEvaluator& ev, double s, double tol, int m_cap = 640);

// Truncation point: smallest b >= max(s,0)+2 with K(b,b) < tol/100.
double choose_truncation(const model::KernelEvaluator& ev, double s, double tol);

namespace detail {
// Weighted kernel matrix ingredients at the mapped nodes, built from cached
// Phi columns (one evaluation per node, not per pair).
struct NystromData {
    std::vector<double> x;   // mapped nodes
    std::vector<double> sw;  // sqrt of mapped weights
    std::vector<cplx> phi1, phi2;
    std::vector<double> diag;  // K(x_i, x_i)
};
NystromData nystrom_data(const model::KernelEvaluator& ev, double a, double b, int m);
double kernel_from_phi(const NystromData& d, int i, int j);
}  // namespace detail

}  // namespace hotw::fredholm
