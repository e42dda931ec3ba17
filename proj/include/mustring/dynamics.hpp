#pragma once

#include <optional>
#include <vector>

#include "mustring/model.hpp"
#include "mustring/mu_space.hpp"
#include "mustring/spectrum.hpp"

namespace mustring {

// A state of the string: position field and conjugate momentum density
// (rho times velocity), each carrying its atom values at the ends.
struct CauchyData {
  MuFunction Q;
  MuFunction P;
};

// Expansion coefficients against the normalized modes, frozen at t = 0.
// pos[i] multiplies mode i of the table, vel[i] is its time derivative.
struct ModeCoeffs {
  std::vector<double> pos;
  std::vector<double> vel;
};

// A residual together with the magnitude of the terms that built it, so
// callers can judge it relative to the cancellation that produced it.
struct Residual {
  double value = 0.0;
  double scale = 0.0;
};

// Explicit boundary particle data for the constraint checks.  When absent,
// the particle coordinates are read off the field traces instead.
struct BoundaryDofs {
  double q0 = 0.0, p0 = 0.0, lambda0 = 0.0;
  double ql = 0.0, pl = 0.0, lambdal = 0.0;
};

struct EndChain {
  Residual c1;  // multiplier against the field slope
  Residual c2;  // particle position against the field trace
  Residual c3;  // particle velocity against the field velocity
  std::vector<Residual> on_q;  // order-k conditions on the position field
  std::vector<Residual> on_p;  // same conditions on the velocity field
};

struct ConstraintChain {
  EndChain left;
  EndChain right;
};

struct TwoMassState {
  double q0 = 0.0, v0 = 0.0, ql = 0.0, vl = 0.0;
};

// The temporal frequency attached to a spatial root: omega scaled by the
// wave speed sqrt(gamma/rho).  The two coincide only when rho = gamma.
double temporal_frequency(const DerivedConstants& d, double omega);

// Coefficients of data against the first modes of the table.
ModeCoeffs project(const CauchyData& data, const ModeTable& table,
                   double tol = 1e-10);

// Rotate each coefficient pair forward by t under its own frequency.
ModeCoeffs coeffs_at(const ModeCoeffs& c, const ModeTable& table, double t);

// Rebuild a state from coefficients; all derivative rules are analytic
// trig sums, so downstream differentiation is exact.
CauchyData synthesize(const ModeCoeffs& c, const ModeTable& table);

// Value of d^a/dt^a d^n/dx^n of the position field at (t, x), from the
// coefficients at t = 0.  Time orders 0, 1, 2 are supported; the second
// time derivative is the analytic mode sum, never a difference quotient.
double field_deriv(const ModeCoeffs& c, const ModeTable& table, double t,
                   double x, int space_order = 0, int time_order = 0);

// Project, check how much energy the truncation discards, rotate, rebuild.
// Throws when the discarded fraction exceeds max_discard.
CauchyData evolve(const CauchyData& data, double t, const ModeTable& table,
                  double tol = 1e-10, double max_discard = 1e-6);

// The conserved Hamiltonian, computed from the state alone through the
// measure calculus (no mode machinery involved).
double energy(const CauchyData& data, const DerivedConstants& d,
              double tol = 1e-10);

// The same quantity from coefficients; serves as the independent route.
double energy_spectral(const ModeCoeffs& c, const ModeTable& table);

// Endpoint equation of motion residual for the evolved field at time t:
// m qdd + k q plus the signed slope pull of the string.
Residual boundary_ode_residual(const ModeCoeffs& c, const ModeTable& table,
                               End e, double t);

// Consistency conditions tying field, particles, and multipliers, with the
// stabilization chain iterated K times on both field families.  The mode
// form differentiates analytically and supports any K.
ConstraintChain constraint_chain(const ModeCoeffs& c, const ModeTable& table,
                                 int K, double t,
                                 const std::optional<BoundaryDofs>& dofs = {});

// Direct form on raw data.  Only K = 0 is available: anything deeper needs
// interior derivatives beyond what a MuFunction can promise.
ConstraintChain constraint_chain(const CauchyData& data, int K,
                                 const StringParams& p,
                                 const DerivedConstants& d,
                                 const std::optional<BoundaryDofs>& dofs = {});

// Massless string with free endpoint masses: straight-line center of mass
// and a single internal oscillation at sqrt(gamma / (ell mu_red)).
TwoMassState two_mass_limit(const StringParams& p, const TwoMassState& ic,
                            double t);

// Ready-made initial states.
CauchyData gaussian_data(const DerivedConstants& d, double center_frac = 0.5,
                         double width_frac = 0.1);
ModeCoeffs single_mode_coeffs(const ModeTable& table, int index,
                              double amplitude = 1.0);
ModeCoeffs two_mode_coeffs(const ModeTable& table, int i, double ai, int j,
                           double aj);

}  // namespace mustring
