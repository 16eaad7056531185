#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hotw/mat2.hpp"

namespace hotw::contour {

// M(z) = (a z + b)/(c z + d), ad - bc != 0.
struct MoebiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx apply(cplx z) const { return (a * z + b) / (c * z + d); }
    cplx inverse(cplx w) const { return (d * w - b) / (-c * w + a); }
    cplx derivative(cplx z) const {
        const cplx q = c * z + d;
        return (a * d - b * c) / (q * q);
    }
    bool is_affine() const { return c == cplx(0.0); }
    // Image of infinity; only meaningful when not affine.
    cplx map_infinity() const { return a / c; }
};

// Affine chart of the segment [z0, z1] onto (-1,1), z0 -> -1.
MoebiusMap segment_chart(cplx z0, cplx z1);

// Moebius chart with z0 -> -1, zm -> 0, z1 -> +1 (zm between z0 and z1 on a
// circular arc).
MoebiusMap three_point_chart(cplx z0, cplx zm, cplx z1);

// One oriented contour piece, chart-mapped to (-1,1) with the traversal
// start -> -1, end -> +1. The plus side is the left of the traversal, which
// the (conformal) chart sends to the upper half plane.
struct ContourComponent {
    MoebiusMap map;
    int degree = 8;          // n^{Gamma_i}
    cplx start{}, end{};     // M^{-1}(-1), M^{-1}(+1)
    bool reversed = false;   // set when a source orientation was flipped
    int junction_at_start = -1;  // filled by CanonicalRHProblem::finalize
    int junction_at_end = -1;

    static ContourComponent segment(cplx z0, cplx z1, int n);
    static ContourComponent circular_arc(cplx z0, cplx zmid, cplx z1, int n);

    // Mapped endpoint-including Chebyshev grid on the component.
    std::vector<cplx> collocation_points() const;
};

struct JunctionIncidence {
    int comp;
    double p;  // M_comp(junction) = +1 or -1
};

struct Junction {
    cplx point;
    std::vector<JunctionIncidence> incident;
};

// Canonical-form RH problem: chartable components plus a jump function G
// evaluable on each (closed) component.
struct CanonicalRHProblem {
    std::vector<ContourComponent> components;
    std::function<Mat2(int comp, cplx zeta)> jump;
    std::vector<Junction> junctions;

    int total_degree() const;

    // Groups coincident endpoints into junctions and validates that each
    // chart actually sends its endpoints to -/+1. Every free endpoint forms
    // a singleton junction (the zero-sum condition there forces U = 0).
    void finalize(double match_tol = 1e-9);
};

}  // namespace hotw::contour
