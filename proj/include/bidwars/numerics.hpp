#pragma once

#include <functional>
#include <vector>

namespace bidwars::numerics {

struct NumericsConfig {
    double quad_abs_tol = 1e-10;
    double root_abs_tol = 1e-12;
    int max_iter = 200;
    int grid_fallback_points = 4096;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

using RealFunction = std::function<double(double)>;

/// Adaptive Simpson quadrature on [a, b]. `b` may be +infinity, in which case
/// the integrand is mapped onto [0, 1) with q = a + t / (1 - t).
double integrate(const RealFunction& f, double a, double b,
                 const NumericsConfig& cfg = {});

/// Bracketed root of f on [lo, hi] (Brent's method with bisection fallback).
/// Non-finite values of f are treated by sign only, so functions returning
/// +/-inf at the bracket ends are accepted.
double find_root(const RealFunction& f, double lo, double hi,
                 const NumericsConfig& cfg = {});

/// Sorted roots found by scanning `n_subdiv` equal subintervals of [lo, hi]
/// for sign changes and refining each. NaN samples break a bracket.
std::vector<double> find_all_roots(const RealFunction& f, double lo, double hi,
                                   int n_subdiv, const NumericsConfig& cfg = {});

/// Maximizer of f on [lo, hi] by golden-section search (f assumed unimodal).
double golden_max(const RealFunction& f, double lo, double hi, double x_tol,
                  int max_iter = 200);

}  // namespace bidwars::numerics
