#pragma once

#include <stdexcept>
#include <string>

namespace hotw {

// Contour geometry is inconsistent (declared junction not shared by the
// incident components, chart endpoints mismatch, ...).
class contour_topology_error : public std::runtime_error {
public:
    explicit contour_topology_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested at a component endpoint where the Cauchy transform
// is log-singular and no zero-sum regularization applies.
class endpoint_singular_error : public std::runtime_error {
public:
    explicit endpoint_singular_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The collocation system stayed singular after zero-sum rank repair.
class no_solution_error : public std::runtime_error {
public:
    explicit no_solution_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An adaptive loop hit its cap without meeting the requested tolerance.
// Carries the best achieved error estimate.
class unresolved_error : public std::runtime_error {
public:
    unresolved_error(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_estimate(achieved) {}
    double achieved_estimate;
};

// I - K is numerically singular in a resolvent computation.
class singular_operator_error : public std::runtime_error {
public:
    explicit singular_operator_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two analytic-continuation routes disagree beyond tolerance.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hotw
