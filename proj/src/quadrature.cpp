#include "mustring/quadrature.hpp"

#include <cmath>

#include "mustring/model.hpp"

namespace mustring {

namespace {

constexpr int kOrder = 32;

struct GlTable {
  std::vector<double> x, w;

  GlTable() {
    x.resize(kOrder);
    w.resize(kOrder);
    const int half = (kOrder + 1) / 2;
    for (int i = 0; i < half; ++i) {
      // Chebyshev-like initial guess, then Newton on P_n.
      double z = std::cos(M_PI * (i + 0.75) / (kOrder + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < kOrder; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = kOrder * (z * p1 - p2) / (z * z - 1.0);
        const double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[kOrder - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[kOrder - 1 - i] = w[i];
    }
  }
};

const GlTable& table() {
  static const GlTable t;
  return t;
}

template <typename T>
T panel_pass(const std::function<T(double)>& f, double a, double b, int panels) {
  const auto& xs = gl32_nodes();
  const auto& ws = gl32_weights();
  const double h = (b - a) / panels;
  T total{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    T acc{};
    for (int i = 0; i < kOrder; ++i) {
      acc += ws[i] * f(mid + half * xs[i]);
    }
    total += acc * half;
  }
  return total;
}

template <typename T>
void run(const std::function<T(double)>& f, double a, double b, double tol,
         int initial_panels, int max_panels, T& value, double& err, int& used) {
  if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  if (initial_panels < 1) initial_panels = 1;
  int panels = initial_panels;
  T prev = panel_pass<T>(f, a, b, panels);
  while (true) {
    if (panels > max_panels / 2) {
      throw NumericalError("quadrature did not converge before the panel limit");
    }
    panels *= 2;
    T cur = panel_pass<T>(f, a, b, panels);
    const double diff = std::abs(cur - prev);
    if (diff <= tol * (1.0 + std::abs(cur))) {
      value = cur;
      err = diff;
      used = panels;
      return;
    }
    prev = cur;
  }
}

}  // namespace

const std::vector<double>& gl32_nodes() { return table().x; }
const std::vector<double>& gl32_weights() { return table().w; }

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, int initial_panels, int max_panels) {
  QuadResult r;
  run<double>(f, a, b, tol, initial_panels, max_panels, r.value,
              r.error_estimate, r.panels);
  return r;
}

QuadResultC integrate_c(const std::function<std::complex<double>(double)>& f,
                        double a, double b, double tol, int initial_panels,
                        int max_panels) {
  QuadResultC r;
  run<std::complex<double>>(f, a, b, tol, initial_panels, max_panels, r.value,
                            r.error_estimate, r.panels);
  return r;
}

}  // namespace mustring
