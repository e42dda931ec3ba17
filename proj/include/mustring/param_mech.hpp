#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mustring/model.hpp"

namespace mustring {

// Point on the constraint surface of the parametrized particle: position,
// clock variable and momentum. The second momentum pi never appears as an
// independent coordinate because pi = -(p^2/2m + W(q)) on the surface.
struct PMState {
  double q = 0.0;
  double t = 0.0;
  double p = 0.0;
};

// Tangent produced by a Hamiltonian vector field at a state. All three
// components are proportional to the lapse value.
struct PMTangent {
  double yq = 0.0;
  double yt = 0.0;
  double yp = 0.0;
};

// Potential with its derivative, both supplied analytically so the field
// evaluation never differentiates numerically.
struct Potential {
  std::function<double(double)> w;
  std::function<double(double)> dw;
};

Potential free_potential();
Potential harmonic_potential(double k);
Potential quartic_potential(double lambda);

// Time multiplier N fixing which Hamiltonian vector field drives the orbit.
// sign_definite records whether the orbit of the unit field is traversed
// without stalling; only then are different lapses guaranteed to sweep the
// same point set.
struct Lapse {
  std::function<double(double s, const PMState&)> value;
  bool sign_definite = true;
};

Lapse unit_lapse();
Lapse constant_lapse(double c);
// 1 + a sin(s); stays positive for |a| < 1
Lapse wavy_lapse(double a);

struct OrbitPoint {
  double s = 0.0;
  PMState state;
};

using Trajectory = std::vector<OrbitPoint>;

// The Hamiltonian vector field at a state: yt = N, yq = (p/m) N,
// yp = -W'(q) N. Every Hamiltonian field is the unit one rescaled.
PMTangent hamiltonian_field(const PMState& st, double s, const Lapse& n,
                            double mass, const Potential& w);

// Fixed-step fourth order Runge-Kutta flow of the field from s0 to s1.
// Throws NumericalError as soon as a state component leaves the finite
// range. The samples include both endpoints, steps + 1 points in total.
Trajectory integrate_orbit(const PMState& start, const Lapse& n, double mass,
                           const Potential& w, double s0, double s1, int steps);

// Intersection of the sampled orbit with the surface t = tau. The crossing
// is located on a bracketing step and refined on a local cubic fit of the
// samples, which keeps the full integrator order. Throws ValidationError
// when tau lies outside the sampled clock range.
std::pair<double, double> gauge_fix(const Trajectory& orbit, double tau);

enum class ObservableKind { Energy, Projection };

// Observable read off a gauge-fixed point. Energy is p^2/2m + W(q), the
// constant of motion of the unparametrized particle; Projection is the bare
// position, which genuinely depends on the chosen section.
double observable(double q_tau, double p_tau, ObservableKind kind, double mass,
                  const Potential& w);

// Energy of the parametrized Lagrangian reconstructed from velocities,
// E = p v + pi tau - L with p, pi from the fiber derivative. Identically
// zero for tau > 0; exposed so orbits can be audited against roundoff.
double parametrized_energy(double q, double v, double tau, double mass,
                           const Potential& w);

// The pi component a tangent needs in order to stay on the constraint
// surface, -(p/m) yp - W'(q) yq. Vanishes on every Hamiltonian tangent.
double lifted_pi_component(const PMState& st, const PMTangent& y, double mass,
                           const Potential& w);

}  // namespace mustring
