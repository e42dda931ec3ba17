#pragma once

#include <functional>
#include <utility>

#include "mustring/model.hpp"
#include "mustring/spectrum.hpp"

namespace mustring {

// Functions live on [0, ell] with point masses glued to the ends: a value on
// the left atom, an interior rule, and a value on the right atom.  The atom
// values are independent of the interior limits; that split is the whole
// point of the space (it is R x L2 x R, not C[0, ell]).
enum class Smoothness { L2, H1, H2 };

struct MuFunction {
  double v0 = 0.0;  // value carried by the atom at x = 0
  double vl = 0.0;  // value carried by the atom at x = ell
  std::function<double(double)> interior;  // required for any evaluation
  std::function<double(double)> d1;        // optional analytic derivative
  std::function<double(double)> d2;        // optional analytic second derivative
  Smoothness tag = Smoothness::H1;

  // One-sided interior limits at the ends.  All the closed-form rules we
  // build extend continuously to the closed interval, so plain evaluation
  // serves as the limit.
  double trace0() const;
  double tracel(double ell) const;
  double trace(End e, double ell) const;
};

// Convenience builder: a function continuous across both atoms (atom value
// equals the interior limit), with whatever derivative rules are supplied.
MuFunction make_smooth(std::function<double(double)> f, double ell,
                       std::function<double(double)> df = {},
                       std::function<double(double)> d2f = {});

// The normalized eigenvector attached to a computed mode: interior X_m/g_m
// with its trig derivatives, and atom values scaled by (1 - alpha_j r_j) so
// the Robin gluing condition holds exactly.
MuFunction make_hat_mode(const DerivedConstants& d, const Mode& mode);

// Interior derivatives with a finite-difference fallback when the analytic
// rule is absent.  Step sizes follow the usual roundoff tradeoff: 1e-6*ell
// for first differences, 1e-4*ell for second.
double deriv1(const MuFunction& f, double x, double ell);
double deriv2(const MuFunction& f, double x, double ell);

// c_j / alpha_j in closed form, r_j / (1 - alpha_j r_j).  Finite for every
// admissible parameter set, including alpha_j = 0.
double robin_weight(const DerivedConstants& d, End e);

// <f,g>_mu = alpha0 f(0)g(0) + integral + alphal f(l)g(l), atoms weighted by
// the measure.  Needs the alpha stage of derive_constants.
double inner_mu(const MuFunction& f, const MuFunction& g,
                const DerivedConstants& d, double tol = 1e-10);

// The product weighting traces by the mass ratios mu_j instead of the atom
// weights; this is the one the classical modes are orthogonal under.
double modified_inner(const MuFunction& f, const MuFunction& g,
                      const DerivedConstants& d, double tol = 1e-10);

// Derivative against the measure: difference quotient across each atom,
// ordinary derivative inside.
MuFunction rn_derivative(const MuFunction& f, const DerivedConstants& d);

// d(FG)/dmu.  Leibniz fails across an atom; the correction is K F'G' with
// K = +alpha0 on the left atom and -alphal on the right.
MuFunction mu_product_derivative(const MuFunction& f, const MuFunction& g,
                                 const DerivedConstants& d);

// (1 + C) d2/dmu2 with C = c_j on the atoms, zero inside.
MuFunction laplacian_mu(const MuFunction& u, const DerivedConstants& d);

// How far u sits from the Robin domain: du/dmu(j) - (+-)(c_j/alpha_j) u(j)
// at each end.  Zero at both ends exactly when the atom value ties to the
// trace as (1 + c_j) u(j) = trace.
std::pair<double, double> robin_domain_residual(const MuFunction& u,
                                                const DerivedConstants& d);

}  // namespace mustring
