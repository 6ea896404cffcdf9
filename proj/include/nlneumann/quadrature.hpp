#pragma once

#include <functional>

namespace nlneumann {

/// Value plus an a-posteriori error estimate.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
};

/// Double-exponential quadrature on a finite interval; tolerates integrable
/// endpoint singularities.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Integral over [a, inf).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a, double rel_tol = 1e-12);

/// Adaptive Gauss-Kronrod (15 points) on a finite interval for smooth integrands.
QuadResult integrate_smooth(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

}  // namespace nlneumann
