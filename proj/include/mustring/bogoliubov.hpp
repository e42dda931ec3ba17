#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mustring/model.hpp"

namespace mustring {

using Complex = std::complex<double>;

// A space-like slice of the strip R x [0, ell], written as sigma -> (t, x)
// with its derivatives supplied alongside. Both x'^2 - t'^2 > 0 and x' > 0
// must hold on the whole interval, and x has to run from 0 to ell.
struct Embedding {
  double ell = 1.0;
  std::function<double(double)> t, x;
  std::function<double(double)> dt, dx;  // derivatives in sigma

  double slope0() const { return dt(0.0) / dx(0.0); }
  double slopel() const { return dt(ell) / dx(ell); }
};

// Samples the invariants on a grid and throws ValidationError on the first
// violation. Every public routine taking embeddings calls this once.
void validate_embedding(const Embedding& X);

// Ready-made slices. flat sits at constant time; tilted_embedding bends the
// time coordinate near one boundary so the slope there becomes s while the
// opposite end stays flat to machine precision; bump_embedding lifts the
// interior by a Gaussian while keeping both boundary slopes flat.
Embedding flat_embedding(double ell, double t0 = 0.0);
Embedding tilted_embedding(double ell, double s, End at, double t0 = 0.0);
Embedding bump_embedding(double ell, double height, double t0 = 0.0);

// Reparametrized copy: sigma -> X(h(sigma)) with h smooth, increasing and
// fixing the endpoints. Used to check that the coefficients only see the
// slice, not its labeling.
Embedding reparametrize(const Embedding& X,
                        const std::function<double(double)>& h,
                        const std::function<double(double)>& dh);

// Boundary data for the massless field: either both ends clamped, or a
// spring r_j = k_j / gamma at each end. Robin with r0 = rl = 0 is Neumann,
// which brings in the constant zero mode.
enum class BcKind { Dirichlet, Robin };

struct BoundaryCondition {
  BcKind kind = BcKind::Dirichlet;
  double r0 = 0.0;
  double rl = 0.0;
};

// One oscillating mode in exponential form,
//   X_k(x) = (a0p e^{i w x} + a0m e^{-i w x}) / c,
// normalized so the plain L2 norm squared is 1 / (2 w). The weights alp/alm
// belong to the right end and only enter the frequency equation.
struct ExpMode {
  int k = 0;  // position in the increasing ladder of positive roots
  double omega = 0.0;
  Complex a0p, a0m, alp, alm;
  double c = 1.0;
};

// The mode family of one boundary condition. Labels are 0-based positions:
// when the constant mode is present it sits at position 0 and the
// oscillating modes follow; otherwise position p is just modes[p].
struct ExpModeBasis {
  BoundaryCondition bc;
  double ell = 1.0;
  bool zero_mode = false;
  std::vector<ExpMode> modes;

  int count() const { return static_cast<int>(modes.size()) + (zero_mode ? 1 : 0); }
  bool is_zero(int pos) const { return zero_mode && pos == 0; }
  const ExpMode& at(int pos) const;

  // Spatial profile and derivative of the mode at position pos (real).
  double profile(int pos, double x) const;
  double profile_d(int pos, double x) const;

  // Full solution phi^eta with eta = +1 (e^{-i w t}) or -1 (e^{+i w t});
  // the constant mode contributes (1 - i eta t) X0 instead.
  Complex sol(int pos, int eta, double t, double x) const;
  Complex sol_dt(int pos, int eta, double t, double x) const;
  Complex sol_dx(int pos, int eta, double t, double x) const;
};

// Builds the first count modes of the boundary condition by a bracketed
// scan of the real frequency equation. Throws NumericalError if the scan
// cannot locate the expected ladder.
ExpModeBasis exp_modes(const BoundaryCondition& bc, int count, double ell);

// Residual of the frequency equation at omega, in the real form whose roots
// are the mode frequencies. Exposed for tests.
double frequency_residual(const BoundaryCondition& bc, double omega, double ell);

// A finite combination sum_p pos[p] phi^+_p + neg[p] phi^-_p over the basis
// labels. Vectors may be shorter than the basis; missing tails are zero.
struct ModeSolution {
  std::vector<Complex> pos, neg;
};

// Quadrature control for the oscillatory slice integrals. Panels start at
// max(min_panels, ceil(per_pi * (w1 + w2) * ell / pi)) and the built-in
// doubling of the integrator provides the convergence check.
struct QuadControl {
  int min_panels = 32;
  double per_pi = 4.0;
  double tol = 1e-10;
};

// The symplectic product of two solutions evaluated on the slice X:
//   i Int [ conj(q1) p2 - q2 conj(p1) ] dsigma
// with q = phi(X(sigma)) and p = x' dphi/dt + t' dphi/dx. The value does
// not depend on the choice of slice.
Complex kg_pairing(const ExpModeBasis& basis, const ModeSolution& s1,
                   const ModeSolution& s2, const Embedding& X,
                   const QuadControl& q = {});

// Gamma and beta entries obtained straight from the definition: transport
// the Cauchy data of phi^+_l from XI to XF and pair against the basis
// solutions there. Works for every label including the constant mode.
struct TransportEntry {
  Complex gamma, beta;
};
TransportEntry transport_coefficients(const Embedding& XI, const Embedding& XF,
                                      const ExpModeBasis& basis, int l, int m,
                                      const QuadControl& q = {});

// Production beta entry through the four oscillatory integrals (two of them
// in closed form). Falls back to the transport route for constant-mode
// labels, which have no exponential form. l is the mode carried from XI,
// m the basis label on XF.
Complex beta(const Embedding& XI, const Embedding& XF,
             const ExpModeBasis& basis, int l, int m,
             const QuadControl& q = {});

// The pointwise quantities controlling the large-frequency behaviour of
// beta at parameter sigma, for the mode pair (l, m).
struct BogoliubovKernel {
  double ni = 0.0;    // x_I'^2 - t_I'^2
  double nf = 0.0;    // x_F'^2 - t_F'^2
  double a = 0.0;     // x_I' x_F' - t_I' t_F'
  double b = 0.0;     // t_I' x_F' - t_F' x_I'
  double ftau = 0.0;  // 1 / ((x_I'(1-tau) + x_F' tau)^2 - (t_I'(1-tau) + t_F' tau)^2)
};
BogoliubovKernel kernel_quantities(const Embedding& XI, const Embedding& XF,
                                   const ExpModeBasis& basis, double sigma,
                                   int l, int m);

// Boundary-term estimate of beta built from the kernel quantities at the
// two ends. Leading order for large omega_l + omega_m.
Complex beta_asymptotic(const Embedding& XI, const Embedding& XF,
                        const ExpModeBasis& basis, int l, int m);

// Outcome of the slope test together with the numerical evidence gathered
// from the truncated beta matrices.
struct UnitarityReport {
  bool unitary = false;          // the analytic decision
  double slope_i0 = 0.0, slope_il = 0.0;
  double slope_f0 = 0.0, slope_fl = 0.0;
  std::vector<int> sizes;        // dyadic ladder of truncation sizes
  std::vector<double> partial;   // S_N for each size, in-order accumulation
  std::vector<double> increment; // S_{2N} - S_N
  double floor = 0.0;            // 1e-4 * S at the smallest size
  // True when the smallest dyadic increment dips below the floor. This is
  // evidence, not the decision: a leaking pair keeps every increment above
  // the floor, while a settling sum shows its tail within the ladder.
  bool increments_converged = false;
  // |beta| over the largest truncation, row-major sizes.back() x sizes.back()
  // with row = carried label, column = target label. Kept so emitting the
  // matrix does not mean computing every entry twice.
  std::vector<double> abs_beta;
};

// Analytic slope test (tolerance 1e-10 on the slope differences at both
// ends) plus partial sums of |beta|^2 over nested truncations up to size
// max_size. threads = 0 picks the MUSTRING_THREADS cap or the hardware
// count. The beta entries are computed in parallel rows but accumulated
// in a fixed order, so the report is deterministic.
UnitarityReport unitarity_classification(const Embedding& XI,
                                         const Embedding& XF,
                                         const ExpModeBasis& basis,
                                         int max_size, int threads = 0,
                                         const QuadControl& q = {});

}  // namespace mustring
