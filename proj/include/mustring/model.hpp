#pragma once

#include <stdexcept>
#include <string>

namespace mustring {

// Thrown when input data is malformed or outside the supported regime.
// The CLI maps it to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical procedure cannot reach its target (no root in the
// admissible bracket, quadrature refusing to converge, truncation overflow).
// The CLI maps it to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical data for a string of length ell with a point mass and a spring
// attached at each end. eps0/epsl switch the end coupling on (1) or off (0);
// an end with eps=0 keeps its oscillator but decouples it from the string.
struct StringParams {
  double rho = 1.0;    // linear mass density of the string
  double gamma = 1.0;  // string tension
  double ell = 1.0;    // string length
  double m0 = 1.0;     // mass at x=0
  double ml = 1.0;     // mass at x=ell
  double k0 = 1.0;     // spring constant at x=0
  double kl = 1.0;     // spring constant at x=ell
  double eps0 = 1.0;   // coupling switch at x=0
  double epsl = 1.0;   // coupling switch at x=ell
};

// Ends carry the sign (-1)^(sigma+1) with sigma(0)=0, sigma(ell)=1, i.e. the
// outward tension term enters with -1 at x=0 and +1 at x=ell.
enum class End { Left = 0, Right = 1 };

inline double end_sign(End j) { return j == End::Left ? -1.0 : 1.0; }

// Reduced constants plus the boundary measure data. alpha_j is the atom
// weight at end j, the unique root of a(1-a r)^2 = mu in [0, 1/(3r)), and
// c_j = alpha_j r_j / (1 - alpha_j r_j) tunes the Laplacian at the ends.
struct DerivedConstants {
  double rho = 1.0;
  double gamma = 1.0;
  double ell = 1.0;
  double mu0 = 0.0, mul = 0.0;  // m_j / rho
  double r0 = 0.0, rl = 0.0;    // k_j / gamma
  double alpha0 = 0.0, alphal = 0.0;
  double c0 = 0.0, cl = 0.0;
  // The alpha branch does not exist for every parameter set (mu_j must stay
  // below 4/(27 r_j)). Spectral root finding only needs mu and r, so reduce()
  // leaves the measure data unset and flags it here.
  bool has_measure = false;

  double mu(End j) const { return j == End::Left ? mu0 : mul; }
  double r(End j) const { return j == End::Left ? r0 : rl; }
  double alpha(End j) const { return j == End::Left ? alpha0 : alphal; }
  double c(End j) const { return j == End::Left ? c0 : cl; }
};

// Basic sanity of the raw parameters. Throws ValidationError.
void validate(const StringParams& p);

// Extra requirements for the spectral pipeline: rho > 0, both ends coupled,
// and at least one spring so the constant zero mode is excluded.
void require_spectral(const StringParams& p);

// Unique root of a (1 - a r)^2 = mu with a in [0, 1/(3r)). Throws
// NumericalError when mu > 4/(27 r), where no root exists on that branch.
double solve_alpha(double mu, double r);

// validate() plus the mu_j, r_j reduction. Needs rho > 0. No alpha solve.
DerivedConstants reduce(const StringParams& p);

// reduce() plus the alpha_j and c_j. Throws NumericalError on parameter sets
// outside the alpha branch.
DerivedConstants derive_constants(const StringParams& p);

}  // namespace mustring
