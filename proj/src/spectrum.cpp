#include "mustring/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "mustring/quadrature.hpp"

namespace mustring {

namespace {

// freq_eq(w) = a(w) cos(w ell) - b(w) sin(w ell)
double coef_a(const DerivedConstants& d, double w) {
  return ((d.mu0 + d.mul) * w * w - (d.r0 + d.rl)) * w;
}

double coef_b(const DerivedConstants& d, double w) {
  return (d.mu0 * w * w - d.r0) * (d.mul * w * w - d.rl) - w * w;
}

}  // namespace

double freq_eq(const DerivedConstants& d, double omega) {
  return coef_a(d, omega) * std::cos(omega * d.ell) -
         coef_b(d, omega) * std::sin(omega * d.ell);
}

double freq_eq_deriv(const DerivedConstants& d, double omega) {
  const double w = omega;
  const double a = coef_a(d, w);
  const double b = coef_b(d, w);
  const double da = 3.0 * (d.mu0 + d.mul) * w * w - (d.r0 + d.rl);
  const double db = 2.0 * d.mu0 * w * (d.mul * w * w - d.rl) +
                    2.0 * d.mul * w * (d.mu0 * w * w - d.r0) - 2.0 * w;
  return (da - b * d.ell) * std::cos(w * d.ell) -
         (a * d.ell + db) * std::sin(w * d.ell);
}

double mode_profile(const DerivedConstants& d, double omega, double x,
                    int order) {
  double A = d.r0 - d.mu0 * omega * omega;
  double B = omega;
  for (int i = 0; i < order; ++i) {
    const double nA = -B * omega;
    const double nB = A * omega;
    A = nA;
    B = nB;
  }
  return A * std::sin(omega * x) + B * std::cos(omega * x);
}

double gm2_closed_form(const DerivedConstants& d, double omega) {
  const double w2 = omega * omega;
  const double A = d.r0 - d.mu0 * w2;  // squares below only need A^2
  const double dl = d.mul * w2 - d.rl;
  const double last = (d.mul * w2 + d.rl) * (w2 + A * A) / (w2 + dl * dl);
  return 0.5 * (d.r0 + (d.ell + d.mu0) * w2 + A * A * d.ell + last);
}

double gm2_quadrature(const DerivedConstants& d, double omega, double tol) {
  const auto f = [&](double x) {
    const double v = mode_profile(d, omega, x);
    return v * v;
  };
  const int p0 = std::max(1, static_cast<int>(omega * d.ell / (2.0 * M_PI)));
  const double interior = integrate(f, 0.0, d.ell, tol, p0).value;
  const double x0 = mode_profile(d, omega, 0.0);
  const double xl = mode_profile(d, omega, d.ell);
  return d.mu0 * x0 * x0 + interior + d.mul * xl * xl;
}

double mode_hat_end(const DerivedConstants& d, const Mode& mode, End j) {
  if (!d.has_measure) {
    throw ValidationError("mode_hat_end needs the boundary measure data, call derive_constants");
  }
  const double x = (j == End::Left) ? 0.0 : d.ell;
  return (1.0 - d.alpha(j) * d.r(j)) * mode_profile(d, mode.omega, x) / mode.gm;
}

double omega_asymptotic(const DerivedConstants& d, int m) {
  if (m < 1) throw ValidationError("omega_asymptotic needs m >= 1");
  const double base = m * M_PI / d.ell;
  if (d.mu0 == 0.0 && d.mul == 0.0) {
    return base + (d.r0 + d.rl) / (M_PI * m);
  }
  if (d.mu0 > 0.0 && d.mul > 0.0) {
    return base + (d.mu0 + d.mul) / (d.mu0 * d.mul * M_PI * m);
  }
  // One mass only: the roots drift to the interval midpoints, and the mass
  // pairs with the spring at the opposite end.
  const double mu = (d.mu0 > 0.0) ? d.mu0 : d.mul;
  const double r_opp = (d.mu0 > 0.0) ? d.rl : d.r0;
  const double c = 1.0 + mu * r_opp;
  return (2.0 * m + 1.0) * M_PI / (2.0 * d.ell) + c / (mu * M_PI * m) -
         c / (2.0 * mu * M_PI * m * m);
}

double inv_gm_asymptotic(const DerivedConstants& d, int m) {
  if (d.mu0 <= 0.0) {
    throw ValidationError("inv_gm_asymptotic is a mu0 > 0 expansion");
  }
  return std::sqrt(2.0) * std::pow(d.ell, 1.5) /
         (d.mu0 * M_PI * M_PI * double(m) * double(m));
}

std::vector<Mode> ModeTable::in_interval(int m) const {
  std::vector<Mode> out;
  for (const Mode& md : modes) {
    if (md.interval == m) out.push_back(md);
  }
  return out;
}

const Mode& ModeTable::by_interval(int m) const {
  const Mode* found = nullptr;
  for (const Mode& md : modes) {
    if (md.interval == m) {
      if (found) throw NumericalError("interval holds two roots, use in_interval");
      found = &md;
    }
  }
  if (!found) throw NumericalError("no root recorded for the requested interval");
  return *found;
}

ModeTable find_modes(const StringParams& p, int max_interval) {
  if (max_interval < 0) {
    throw ValidationError("find_modes needs max_interval >= 0");
  }
  // Carry the atom weights along when they exist; parameter sets outside
  // the solvable branch still get a perfectly good spectrum without them.
  DerivedConstants d;
  try {
    d = derive_constants(p);
  } catch (const NumericalError&) {
    d = reduce(p);
  }
  if (p.eps0 != 1.0 || p.epsl != 1.0) {
    throw ValidationError("the mode pipeline assumes both ends coupled (eps0 = epsl = 1)");
  }

  const double step = M_PI / d.ell;
  const int sub = 64;
  const double h = step / sub;

  auto refine = [&](double lo, double hi, double flo) {
    for (int i = 0; i < 80 && (hi - lo) > 1e-13 * step; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = freq_eq(d, mid);
      if (fm == 0.0) return mid;
      if ((flo < 0.0) != (fm < 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    double w = 0.5 * (lo + hi);
    for (int i = 0; i < 5; ++i) {
      const double f = freq_eq(d, w);
      const double df = freq_eq_deriv(d, w);
      if (df == 0.0) break;
      const double next = w - f / df;
      if (next < lo || next > hi) break;
      const bool settled = std::abs(next - w) < 1e-16 * (1.0 + w);
      w = next;
      if (settled) break;
    }
    return w;
  };

  std::vector<double> roots;
  const int cells = sub * (max_interval + 1);
  // Start just right of zero; G(0) = 0 identically, and the lowest root can
  // undercut the first grid cell when the springs are weak.
  double px = 1e-6 * h;
  double pf = freq_eq(d, px);
  for (int i = 1; i <= cells; ++i) {
    const double x = i * h;
    const double f = freq_eq(d, x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (pf != 0.0 && (pf < 0.0) != (f < 0.0)) {
      roots.push_back(refine(px, x, pf));
    }
    px = x;
    pf = f;
  }

  const double smu = d.mu0 + d.mul;
  const double sr = d.r0 + d.rl;
  bool exceptional = false;
  int pole_interval = -1;
  if (smu > 0.0 && sr > 0.0) {
    const double pole = std::sqrt(sr / smu);
    const double q = pole * d.ell / M_PI;
    const double qr = std::round(q);
    if (qr >= 1.0 && std::abs(q - qr) < 1e-9) {
      exceptional = true;
      pole_interval = static_cast<int>(qr);
      const double edge = qr * M_PI / d.ell;
      bool present = false;
      for (double w : roots) {
        if (std::abs(w - edge) <= 1e-6 * step) {
          present = true;
          break;
        }
      }
      // The secular function vanishes on the edge by construction here; the
      // grid normally catches it, this covers an exact-zero grid miss.
      if (!present && pole_interval <= max_interval) roots.push_back(edge);
    } else {
      pole_interval = static_cast<int>(std::floor(q));
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique_roots;
  for (double w : roots) {
    if (unique_roots.empty() || w - unique_roots.back() > 1e-10 * step) {
      unique_roots.push_back(w);
    }
  }

  auto interval_of = [&](double w) {
    const double q = w * d.ell / M_PI;
    const double qr = std::round(q);
    if (std::abs(q - qr) < 1e-9) return static_cast<int>(qr);
    return static_cast<int>(std::floor(q));
  };

  ModeTable table;
  table.params = p;
  table.d = d;
  table.max_interval = max_interval;
  table.exceptional = exceptional;

  std::vector<int> cnt(max_interval + 1, 0);
  for (double w : unique_roots) {
    const int m = interval_of(w);
    if (m > max_interval) continue;
    cnt[m] += 1;
    Mode mode;
    mode.interval = m;
    mode.omega = w;
    mode.gm = std::sqrt(gm2_closed_form(d, w));
    table.modes.push_back(mode);
  }

  for (int m = 0; m <= max_interval; ++m) {
    if (cnt[m] == 1) continue;
    if (cnt[m] == 2 && m == pole_interval && table.double_root_interval < 0) {
      table.double_root_interval = m;
      continue;
    }
    if (cnt[m] == 0 && m == 0 && smu == 0.0 && sr == 0.0) {
      // Fully free ends reduce the equation to w^2 sin(w ell); the first
      // interval is genuinely empty.
      continue;
    }
    throw NumericalError("mode scan found an unexpected root pattern in interval " +
                         std::to_string(m));
  }

  return table;
}

double completeness_end_sum(const ModeTable& t, End j, int n_modes) {
  if (!t.d.has_measure) {
    throw ValidationError("completeness sums need the boundary measure data");
  }
  const int n = (n_modes < 0) ? t.count() : std::min(n_modes, t.count());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = mode_hat_end(t.d, t.modes[i], j);
    acc += v * v;
  }
  return t.d.alpha(j) * acc;
}

double completeness_cross_sum(const ModeTable& t, int n_modes) {
  if (!t.d.has_measure) {
    throw ValidationError("completeness sums need the boundary measure data");
  }
  const int n = (n_modes < 0) ? t.count() : std::min(n_modes, t.count());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += mode_hat_end(t.d, t.modes[i], End::Left) *
           mode_hat_end(t.d, t.modes[i], End::Right);
  }
  return acc;
}

double completeness_tail_estimate(const DerivedConstants& d, End j, int n) {
  if (d.mu(j) <= 0.0) {
    throw ValidationError("the completeness tail estimate needs a mass at this end");
  }
  return 2.0 * d.ell / (d.mu(j) * M_PI * M_PI * n);
}

}  // namespace mustring
