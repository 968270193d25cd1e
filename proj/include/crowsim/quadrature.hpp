// quadrature.hpp — Adaptive Gauss-Kronrod integration for complex integrands

#pragma once

#include <complex>
#include <functional>

namespace crowsim {

struct QuadratureOptions {
    double abs_tol{1e-12};
    int max_intervals{4000};
};

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error{0.0};       // estimated absolute error
    bool converged{false};
    long evaluations{0};
};

// Adaptive bisection with a G7/K15 rule per panel. Never throws; the caller
// decides what a failed tolerance means.
QuadratureResult integrate_gk(const std::function<std::complex<double>(double)>& f,
                              double a, double b, const QuadratureOptions& opts = {});

}  // namespace crowsim
