#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hotw/contour.hpp"
#include "hotw/rh_solver.hpp"

namespace hotw::model {

// Parameters of the order-k kernel K^(k)(u,v; t_0..t_{2k-1}).
struct ModelParams {
    int k = 0;
    std::vector<double> t;          // exactly 2k entries
    double truncation_radius = 0.0; // 0: chosen so the ray jumps decay below jump_tol
    double jump_tol = 1e-16;
    double rh_tol = 1e-12;

    void validate() const;
    // Ray angle pi(1 - 1/(4k+3)); the rays attach to the unit circle there.
    double ray_angle() const { return M_PI * (1.0 - 1.0 / (4.0 * k + 3.0)); }
    std::string cache_key() const;
};

// Branch of the fractional powers: principal (cut on (-inf,0]), or the
// continuation across the cut from above/below.
enum class Branch { principal, above, below };

// theta(zeta) = 2/(4k+3) zeta^{(4k+3)/2} - 2 sum_j (-1)^j t_j/(2j+1) zeta^{(2j+1)/2}.
cplx theta(cplx zeta, const ModelParams& p, Branch br = Branch::principal);
cplx theta_deriv(cplx zeta, const ModelParams& p, Branch br = Branch::principal);

Mat2 N_matrix();
Mat2 S1();
Mat2 S2();
Mat2 S3();
Mat2 S4();

// W(zeta) = zeta^{-sigma3/4} N e^{-theta sigma3}; W_-/W_+ are the
// continuations across (-inf, 0) from below/above.
Mat2 W(cplx zeta, const ModelParams& p, Branch br = Branch::principal);
Mat2 W_deriv(cplx zeta, const ModelParams& p, Branch br = Branch::principal);

// Smallest R >= 2 with || W S_j W^-1 - I || < p.jump_tol at radius R on
// every ray.
double choose_truncation_radius(const ModelParams& p);

// Canonical-form contour and jumps for Psi^(2k): three truncated rays and
// three unit-circle arcs split where the rays attach.
contour::CanonicalRHProblem build_psi_problem(const ModelParams& p);

// Region prefactor of the map back to Phi. Throws consistency errors on the
// region boundaries (callers pass a side by nudging zeta).
Mat2 phi_from_psi(const rh::SpectralSolution& sol, const ModelParams& p, cplx zeta);

// A solved (k, t) instance exposing the kernel, including the diagonal.
// Immutable; evaluations are safe to run concurrently.
class KernelEvaluator {
public:
    KernelEvaluator(ModelParams params, rh::SpectralSolution sol);

    // Solve (or re-solve at a finer tolerance) for the given parameters.
    // cache_dir, when set, is consulted for previously solved coefficients.
    static KernelEvaluator build(ModelParams params,
                                 const std::optional<std::string>& cache_dir = std::nullopt);

    const ModelParams& params() const { return params_; }
    const rh::SpectralSolution& solution() const { return sol_; }

    // (Phi_1(u), Phi_2(u)): the entire extensions of the first column.
    std::array<cplx, 2> phi12(double u) const;
    std::array<cplx, 2> phi12_deriv(double u) const;

    // K(u,v); switches to the confluent form near the diagonal.
    double kernel(double u, double v) const;
    cplx kernel_complex(double u, double v) const;  // pre-realification value

private:
    ModelParams params_;
    rh::SpectralSolution sol_;
};

}  // namespace hotw::model
