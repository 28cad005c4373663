#pragma once

#include <functional>
#include <span>
#include <vector>

namespace randopt::quad {

struct Tolerance {
    double rel = 1e-12;
    double abs = 1e-15;
    int max_panels = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod integration on the finite
/// interval [a, b]. `breaks` are interior points where the integrand is
/// known to be non-smooth (support endpoints, kinks); the integrand is
/// never evaluated exactly on a panel boundary.
Result integrate(const Integrand& f, double a, double b, std::span<const double> breaks = {},
                 Tolerance tol = {});

/// Sorted, de-duplicated breakpoints strictly inside (a, b).
std::vector<double> clip_breaks(std::vector<double> pts, double a, double b);

}  // namespace randopt::quad
