#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace mustring {

// 32-point Gauss-Legendre nodes and weights on [-1, 1], generated once by
// Newton iteration on the Legendre recurrence so no tabulated digits are
// carried around.
const std::vector<double>& gl32_nodes();
const std::vector<double>& gl32_weights();

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // change seen at the last panel doubling
  int panels = 0;
};

struct QuadResultC {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  int panels = 0;
};

// Composite 32-point rule over [a, b]. Starts at initial_panels uniform
// panels and doubles until successive refinements differ by less than
// tol * (1 + |result|). Throws NumericalError when max_panels is reached
// without convergence.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10, int initial_panels = 1,
                     int max_panels = 1 << 20);

QuadResultC integrate_c(const std::function<std::complex<double>(double)>& f,
                        double a, double b, double tol = 1e-10,
                        int initial_panels = 1, int max_panels = 1 << 20);

}  // namespace mustring
