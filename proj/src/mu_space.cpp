#include "mustring/mu_space.hpp"

#include <cmath>
#include <utility>

#include "mustring/quadrature.hpp"

namespace mustring {

namespace {

void require_interior(const MuFunction& f, const char* who) {
  if (!f.interior) {
    throw ValidationError(std::string(who) + ": function has no interior rule");
  }
}

void require_h1(const MuFunction& f, const char* who) {
  require_interior(f, who);
  if (f.tag == Smoothness::L2) {
    throw ValidationError(std::string(who) +
                          ": function is only tagged L2, no derivative exists");
  }
}

}  // namespace

double MuFunction::trace0() const { return interior(0.0); }

double MuFunction::tracel(double ell) const { return interior(ell); }

double MuFunction::trace(End e, double ell) const {
  return e == End::Left ? trace0() : tracel(ell);
}

MuFunction make_smooth(std::function<double(double)> f, double ell,
                       std::function<double(double)> df,
                       std::function<double(double)> d2f) {
  if (!f) {
    throw ValidationError("make_smooth: empty interior rule");
  }
  MuFunction out;
  out.v0 = f(0.0);
  out.vl = f(ell);
  out.interior = std::move(f);
  out.d1 = std::move(df);
  out.d2 = std::move(d2f);
  out.tag = Smoothness::H2;
  return out;
}

MuFunction make_hat_mode(const DerivedConstants& d, const Mode& mode) {
  if (!d.has_measure) {
    throw ValidationError("make_hat_mode: constants lack the atom weights");
  }
  const double w = mode.omega;
  const double g = mode.gm;
  MuFunction out;
  out.interior = [d, w, g](double x) { return mode_profile(d, w, x) / g; };
  out.d1 = [d, w, g](double x) { return mode_profile(d, w, x, 1) / g; };
  out.d2 = [d, w, g](double x) { return mode_profile(d, w, x, 2) / g; };
  out.v0 = (1.0 - d.alpha0 * d.r0) * mode_profile(d, w, 0.0) / g;
  out.vl = (1.0 - d.alphal * d.rl) * mode_profile(d, w, d.ell) / g;
  out.tag = Smoothness::H2;
  return out;
}

double deriv1(const MuFunction& f, double x, double ell) {
  require_h1(f, "deriv1");
  if (f.d1) {
    return f.d1(x);
  }
  const double h = 1e-6 * ell;
  if (x - h >= 0.0 && x + h <= ell) {
    return (f.interior(x + h) - f.interior(x - h)) / (2.0 * h);
  }
  // one-sided second-order stencil at the ends
  const double s = (x - h < 0.0) ? 1.0 : -1.0;
  return s *
         (-3.0 * f.interior(x) + 4.0 * f.interior(x + s * h) -
          f.interior(x + 2.0 * s * h)) /
         (2.0 * h);
}

double deriv2(const MuFunction& f, double x, double ell) {
  require_h1(f, "deriv2");
  if (f.d2) {
    return f.d2(x);
  }
  const double h = 1e-4 * ell;
  if (x - h >= 0.0 && x + h <= ell) {
    return (f.interior(x + h) - 2.0 * f.interior(x) + f.interior(x - h)) /
           (h * h);
  }
  const double s = (x - h < 0.0) ? 1.0 : -1.0;
  const double f0 = f.interior(x);
  const double f1 = f.interior(x + s * h);
  const double f2 = f.interior(x + 2.0 * s * h);
  const double f3 = f.interior(x + 3.0 * s * h);
  return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
}

double robin_weight(const DerivedConstants& d, End e) {
  if (!d.has_measure) {
    throw ValidationError("robin_weight: constants lack the atom weights");
  }
  return d.r(e) / (1.0 - d.alpha(e) * d.r(e));
}

double inner_mu(const MuFunction& f, const MuFunction& g,
                const DerivedConstants& d, double tol) {
  if (!d.has_measure) {
    throw ValidationError("inner_mu: constants lack the atom weights");
  }
  require_interior(f, "inner_mu");
  require_interior(g, "inner_mu");
  const auto q = integrate(
      [&f, &g](double x) { return f.interior(x) * g.interior(x); }, 0.0, d.ell,
      tol);
  return d.alpha0 * f.v0 * g.v0 + q.value + d.alphal * f.vl * g.vl;
}

double modified_inner(const MuFunction& f, const MuFunction& g,
                      const DerivedConstants& d, double tol) {
  require_interior(f, "modified_inner");
  require_interior(g, "modified_inner");
  const auto q = integrate(
      [&f, &g](double x) { return f.interior(x) * g.interior(x); }, 0.0, d.ell,
      tol);
  return d.mu0 * f.trace0() * g.trace0() + q.value +
         d.mul * f.tracel(d.ell) * g.tracel(d.ell);
}

MuFunction rn_derivative(const MuFunction& f, const DerivedConstants& d) {
  if (!d.has_measure) {
    throw ValidationError("rn_derivative: constants lack the atom weights");
  }
  require_h1(f, "rn_derivative");
  const double ell = d.ell;
  MuFunction out;
  // Across an atom the derivative is the jump divided by the atom weight.
  // A weightless end carries no atom; the interior limit of the classical
  // derivative is the only sensible value, and nothing downstream weights it.
  out.v0 = d.alpha0 > 0.0 ? (f.trace0() - f.v0) / d.alpha0
                          : deriv1(f, 0.0, ell);
  out.vl = d.alphal > 0.0 ? (f.vl - f.tracel(ell)) / d.alphal
                          : deriv1(f, ell, ell);
  if (f.d1) {
    out.interior = f.d1;
  } else {
    MuFunction base = f;
    out.interior = [base, ell](double x) { return deriv1(base, x, ell); };
  }
  if (f.d2) {
    out.d1 = f.d2;
  }
  out.tag = f.tag == Smoothness::H2 ? Smoothness::H1 : Smoothness::L2;
  return out;
}

MuFunction mu_product_derivative(const MuFunction& f, const MuFunction& g,
                                 const DerivedConstants& d) {
  if (!d.has_measure) {
    throw ValidationError("mu_product_derivative: constants lack atom weights");
  }
  require_h1(f, "mu_product_derivative");
  require_h1(g, "mu_product_derivative");
  const MuFunction df = rn_derivative(f, d);
  const MuFunction dg = rn_derivative(g, d);
  const double ell = d.ell;
  MuFunction out;
  // On the atoms the undifferentiated factors are the atom values and the
  // Leibniz correction K f'g' carries K = +alpha0 on the left, -alphal on
  // the right (expand the jump of a product to see both signs appear).
  out.v0 = df.v0 * g.v0 + f.v0 * dg.v0 + d.alpha0 * df.v0 * dg.v0;
  out.vl = df.vl * g.vl + f.vl * dg.vl - d.alphal * df.vl * dg.vl;
  {
    MuFunction fc = f;
    MuFunction gc = g;
    out.interior = [fc, gc, ell](double x) {
      return deriv1(fc, x, ell) * gc.interior(x) +
             fc.interior(x) * deriv1(gc, x, ell);
    };
    if (f.d1 && f.d2 && g.d1 && g.d2) {
      out.d1 = [fc, gc](double x) {
        return fc.d2(x) * gc.interior(x) + 2.0 * fc.d1(x) * gc.d1(x) +
               fc.interior(x) * gc.d2(x);
      };
    }
  }
  out.tag = (f.tag == Smoothness::H2 && g.tag == Smoothness::H2)
                ? Smoothness::H1
                : Smoothness::L2;
  return out;
}

MuFunction laplacian_mu(const MuFunction& u, const DerivedConstants& d) {
  if (!d.has_measure) {
    throw ValidationError("laplacian_mu: constants lack the atom weights");
  }
  require_interior(u, "laplacian_mu");
  if (u.tag != Smoothness::H2) {
    throw ValidationError("laplacian_mu: function is not tagged H2");
  }
  const MuFunction du = rn_derivative(u, d);
  const MuFunction d2u = rn_derivative(du, d);
  MuFunction out;
  out.v0 = (1.0 + d.c0) * d2u.v0;
  out.vl = (1.0 + d.cl) * d2u.vl;
  out.interior = d2u.interior;
  out.tag = Smoothness::L2;
  return out;
}

std::pair<double, double> robin_domain_residual(const MuFunction& u,
                                                const DerivedConstants& d) {
  const MuFunction du = rn_derivative(u, d);
  const double left = du.v0 - robin_weight(d, End::Left) * u.v0;
  const double right = du.vl + robin_weight(d, End::Right) * u.vl;
  return {left, right};
}

}  // namespace mustring
