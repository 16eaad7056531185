#pragma once

// Independent Airy function evaluation for oracle tests: Taylor-series ODE
// marching from exact values at 0 (and from the asymptotic expansion at
// x = 12 for the decaying direction). No dependence on the RH machinery.
namespace oracle {

struct AiryValue {
    double ai;
    double dai;
};

// Ai(x) and Ai'(x) on [-15, 12], absolute accuracy ~1e-14.
AiryValue airy(double x);

}  // namespace oracle
