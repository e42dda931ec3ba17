#include "mustring/model.hpp"

#include <cmath>
#include <limits>

namespace mustring {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

void check_nonneg(double v, const char* name) {
  check_finite(v, name);
  if (v < 0.0) {
    throw ValidationError(std::string(name) + " must be nonnegative");
  }
}

void check_positive(double v, const char* name) {
  check_finite(v, name);
  if (v <= 0.0) {
    throw ValidationError(std::string(name) + " must be positive");
  }
}

}  // namespace

void validate(const StringParams& p) {
  check_nonneg(p.rho, "rho");
  check_positive(p.gamma, "gamma");
  check_positive(p.ell, "ell");
  check_nonneg(p.m0, "m0");
  check_nonneg(p.ml, "ml");
  check_nonneg(p.k0, "k0");
  check_nonneg(p.kl, "kl");
  if ((p.eps0 != 0.0 && p.eps0 != 1.0) || (p.epsl != 0.0 && p.epsl != 1.0)) {
    throw ValidationError("eps0 and epsl are coupling switches and must be 0 or 1");
  }
}

void require_spectral(const StringParams& p) {
  validate(p);
  if (p.rho <= 0.0) {
    throw ValidationError("the mode pipeline needs rho > 0 (use the two-mass limit for rho = 0)");
  }
  if (p.eps0 != 1.0 || p.epsl != 1.0) {
    throw ValidationError("the mode pipeline assumes both ends coupled (eps0 = epsl = 1)");
  }
  if (p.k0 <= 0.0 && p.kl <= 0.0) {
    throw ValidationError("at least one spring must be present, otherwise the constant mode has zero frequency");
  }
}

double solve_alpha(double mu, double r) {
  if (!(mu >= 0.0) || !(r >= 0.0)) {
    throw ValidationError("solve_alpha needs mu >= 0 and r >= 0");
  }
  if (mu == 0.0) return 0.0;
  if (r == 0.0) return mu;

  // g(a) = a (1 - a r)^2 increases from 0 to 4/(27 r) on [0, 1/(3r)], so the
  // branch admits a unique root iff mu stays below that ceiling.
  const double a_hi = 1.0 / (3.0 * r);
  const double g_max = 4.0 / (27.0 * r);
  if (mu > g_max * (1.0 + 1e-12)) {
    throw NumericalError("no boundary weight alpha: mu exceeds 4/(27 r) for this end");
  }
  const double target = std::min(mu, g_max);

  auto g = [r](double a) {
    const double s = 1.0 - a * r;
    return a * s * s;
  };

  double lo = 0.0, hi = a_hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double a = 0.5 * (lo + hi);

  // Newton polish; g'(a) = (1 - a r)(1 - 3 a r) stays positive inside the bracket.
  for (int i = 0; i < 8; ++i) {
    const double s = 1.0 - a * r;
    const double d = s * (1.0 - 3.0 * a * r);
    if (d <= 0.0) break;
    double step = (g(a) - target) / d;
    double next = a - step;
    if (next < lo || next > hi) break;
    a = next;
    if (std::abs(step) < 1e-17 * (1.0 + a)) break;
  }

  if (std::abs(g(a) - target) > 1e-12 * (1.0 + target)) {
    throw NumericalError("alpha solve did not reach the residual target");
  }
  return a;
}

DerivedConstants reduce(const StringParams& p) {
  validate(p);
  if (p.rho <= 0.0) {
    throw ValidationError("reduce needs rho > 0");
  }
  DerivedConstants d;
  d.rho = p.rho;
  d.gamma = p.gamma;
  d.ell = p.ell;
  d.mu0 = p.m0 / p.rho;
  d.mul = p.ml / p.rho;
  d.r0 = p.k0 / p.gamma;
  d.rl = p.kl / p.gamma;
  return d;
}

DerivedConstants derive_constants(const StringParams& p) {
  DerivedConstants d = reduce(p);
  d.alpha0 = solve_alpha(d.mu0, d.r0);
  d.alphal = solve_alpha(d.mul, d.rl);
  d.c0 = d.alpha0 * d.r0 / (1.0 - d.alpha0 * d.r0);
  d.cl = d.alphal * d.rl / (1.0 - d.alphal * d.rl);
  d.has_measure = true;
  return d;
}

}  // namespace mustring
