#include "hotw/contour.hpp"

#include <cmath>
#include <stdexcept>

#include "hotw/chebyshev.hpp"
#include "hotw/errors.hpp"

namespace hotw::contour {

MoebiusMap segment_chart(cplx z0, cplx z1) {
    if (z0 == z1) throw std::invalid_argument("segment_chart: degenerate segment");
    MoebiusMap m;
    m.a = 2.0;
    m.b = -(z0 + z1);
    m.c = 0.0;
    m.d = z1 - z0;
    return m;
}

MoebiusMap three_point_chart(cplx z0, cplx zm, cplx z1) {
    const cplx denom = z0 + z1 - 2.0 * zm;
    if (std::abs(denom) < 1e-14 * (std::abs(z0) + std::abs(z1) + 1.0))
        return segment_chart(z0, z1);  // collinear: zm is the chord midpoint
    const cplx X = (2.0 * z0 * z1 - zm * (z0 + z1)) / denom;
    const cplx kappa = (z1 - X) / (z1 - zm);
    MoebiusMap m;
    m.a = kappa;
    m.b = -kappa * zm;
    m.c = 1.0;
    m.d = -X;
    return m;
}

ContourComponent ContourComponent::segment(cplx z0, cplx z1, int n) {
    ContourComponent c;
    c.map = segment_chart(z0, z1);
    c.degree = n;
    c.start = z0;
    c.end = z1;
    return c;
}

ContourComponent ContourComponent::circular_arc(cplx z0, cplx zmid, cplx z1, int n) {
    ContourComponent c;
    c.map = three_point_chart(z0, zmid, z1);
    c.degree = n;
    c.start = z0;
    c.end = z1;
    return c;
}

std::vector<cplx> ContourComponent::collocation_points() const {
    const auto x = cheb::cheb_points(degree);
    std::vector<cplx> pts(x.size());
    for (size_t i = 0; i < x.size(); ++i) pts[i] = map.inverse(x[i]);
    // Pin the endpoints exactly.
    pts.front() = start;
    pts.back() = end;
    return pts;
}

int CanonicalRHProblem::total_degree() const {
    int n = 0;
    for (const auto& c : components) n += c.degree;
    return n;
}

void CanonicalRHProblem::finalize(double match_tol) {
    junctions.clear();
    for (size_t i = 0; i < components.size(); ++i) {
        auto& comp = components[i];
        const cplx m_start = comp.map.inverse(-1.0);
        const cplx m_end = comp.map.inverse(1.0);
        if (std::abs(m_start - comp.start) > 1e-12 * (1.0 + std::abs(comp.start)) ||
            std::abs(m_end - comp.end) > 1e-12 * (1.0 + std::abs(comp.end)))
            throw contour_topology_error("component chart endpoints do not match declared endpoints");
        for (int e = 0; e < 2; ++e) {
            const cplx pt = (e == 0) ? comp.start : comp.end;
            const double p = (e == 0) ? -1.0 : 1.0;
            int found = -1;
            for (size_t j = 0; j < junctions.size(); ++j) {
                if (std::abs(junctions[j].point - pt) <= match_tol * (1.0 + std::abs(pt))) {
                    found = static_cast<int>(j);
                    break;
                }
            }
            if (found < 0) {
                junctions.push_back({pt, {}});
                found = static_cast<int>(junctions.size()) - 1;
            }
            junctions[static_cast<size_t>(found)].incident.push_back({static_cast<int>(i), p});
            if (e == 0)
                comp.junction_at_start = found;
            else
                comp.junction_at_end = found;
        }
    }
}

}  // namespace hotw::contour
