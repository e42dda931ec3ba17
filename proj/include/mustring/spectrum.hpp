#pragma once

#include <vector>

#include "mustring/model.hpp"

namespace mustring {

// One positive root of the frequency equation. interval is the index m of the
// bracket [m pi/ell, (m+1) pi/ell) containing omega; gm is the norm of the
// unnormalized profile under the mass-weighted product, gm^2 = <<X, X>>.
struct Mode {
  int interval = 0;
  double omega = 0.0;
  double gm = 0.0;
};

struct ModeTable {
  StringParams params;
  DerivedConstants d;
  std::vector<Mode> modes;  // ascending in omega
  int max_interval = 0;
  // At most one scanned interval can hold two roots: the one containing
  // sqrt((r0+rl)/(mu0+mul)), where the increasing side of the secular
  // function jumps through a pole. -1 when no scanned interval does.
  int double_root_interval = -1;
  // Set when that point sits on an interval edge to within 1e-9 of an
  // integer multiple of pi/ell, which puts a root exactly on the edge.
  bool exceptional = false;

  int count() const { return static_cast<int>(modes.size()); }
  // Roots bracketed by I_m; size 1 except on the double-root interval.
  std::vector<Mode> in_interval(int m) const;
  // The unique root in I_m; throws when the interval holds none or two.
  const Mode& by_interval(int m) const;
};

// Secular function whose positive zeros are the mode frequencies:
//   (w^2 (mu0+mul) - (r0+rl)) w cos(w ell)
//     - ((mu0 w^2 - r0)(mul w^2 - rl) - w^2) sin(w ell)
double freq_eq(const DerivedConstants& d, double omega);
double freq_eq_deriv(const DerivedConstants& d, double omega);

// All roots with omega in (0, (max_interval+1) pi/ell), found by a sign-change
// scan on a 64-point subgrid per interval, refined by bisection plus a few
// guarded Newton steps. Verifies the expected one-root-per-interval pattern
// and throws NumericalError when the scan sees anything else.
ModeTable find_modes(const StringParams& p, int max_interval);

// Unnormalized profile X(x) = (r0 - mu0 w^2) sin(w x) + w cos(w x) and its
// x-derivatives of any order. X(0) = w for every mode.
double mode_profile(const DerivedConstants& d, double omega, double x,
                    int order = 0);

// gm^2 in closed form, valid at roots of the secular function.
double gm2_closed_form(const DerivedConstants& d, double omega);

// gm^2 = mu0 X(0)^2 + int_0^ell X^2 + mul X(ell)^2 by quadrature, as an
// independent route for tests.
double gm2_quadrature(const DerivedConstants& d, double omega,
                      double tol = 1e-12);

// Endpoint value of the normalized measure-space eigenvector,
// (1 - alpha_j r_j) X(j) / gm. Needs the alpha data in d.
double mode_hat_end(const DerivedConstants& d, const Mode& mode, End j);

// Large-m frequency expansions; the branch is picked by which mu vanish.
double omega_asymptotic(const DerivedConstants& d, int m);

// Leading behavior of 1/gm for mu0 > 0: sqrt(2) ell^(3/2) / (mu0 pi^2 m^2).
double inv_gm_asymptotic(const DerivedConstants& d, int m);

// Partial sums of the endpoint completeness identities built from the
// expansion of the indicator of one end: alpha_j sum_m Xhat_m(j)^2 -> 1 and
// sum_m Xhat_m(0) Xhat_m(ell) -> 0.
double completeness_end_sum(const ModeTable& t, End j, int n_modes);
double completeness_cross_sum(const ModeTable& t, int n_modes);

// Predicted tail of the end sum past the first n modes, 2 ell/(mu_j pi^2 n).
double completeness_tail_estimate(const DerivedConstants& d, End j, int n);

}  // namespace mustring
