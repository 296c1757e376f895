#pragma once

#include <functional>
#include <span>

namespace qslspin::quadrature {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// Fills values[i] = f(nodes[i]); batched so integrands can use the SIMD kernels.
using BatchIntegrand = std::function<void(std::span<const double> nodes, std::span<double> values)>;

// Globally adaptive 7/15-point Gauss-Kronrod. Stops once the summed error
// estimate is below max(abs_tol, rel_tol * |value|) or the subdivision budget
// is exhausted (the returned error estimate then exceeds the request).
Result gauss_kronrod(const BatchIntegrand& f, double a, double b, double abs_tol, double rel_tol,
                     int max_subdivisions = 4000);
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_subdivisions = 4000);

// Composite trapezoid rule over sampled data (x strictly increasing).
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace qslspin::quadrature
