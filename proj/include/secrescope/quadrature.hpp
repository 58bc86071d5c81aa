#pragma once

#include <functional>
#include <vector>

namespace secrescope {

struct QuadOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;
    int max_panels = 4000;
    // Tail cutoff: integrand below cutoff_ratio * peak counts as negligible.
    double cutoff_ratio = 1e-14;
    // Doubling the cutoff must move the result by less than this.
    double doubling_tol = 1e-6;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
    double cutoff = 0.0;
};

using Integrand = std::function<double(double)>;

// Adaptive 21-point Gauss-Kronrod on [a, b], optional interior breakpoints.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {},
                     const std::vector<double>& breakpoints = {});

// Integral over [a, inf). `scale` is a rough location of the integrand's mass.
QuadResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                 const QuadOptions& opt = {});

}  // namespace secrescope
