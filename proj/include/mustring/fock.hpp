#pragma once

#include <complex>
#include <map>
#include <vector>

#include "mustring/dynamics.hpp"
#include "mustring/model.hpp"
#include "mustring/spectrum.hpp"

namespace mustring {

using Complex = std::complex<double>;

// A one-particle state, stored against the orthonormal positive-frequency
// basis vectors (one per mode of some table, same ordering).
struct OneParticleVector {
  std::vector<Complex> c;
};

// Positive and negative frequency labels of a complex solution.  For real
// Cauchy data the negative part is the conjugate of the positive one.
struct SplitCoeffs {
  std::vector<Complex> pos;
  std::vector<Complex> neg;
};

// A vector in the truncated symmetric Fock space: amplitudes on occupation
// tuples (n_1 .. n_modes) with total particle number at most nmax.  The map
// keeps keys ordered, so sums over a state are reproducible.  Basis kets
// are NOT unit vectors here: <n|n> is the product of the factorials, the
// price of making symmetric products and coherent overlaps come out exact.
struct FockState {
  int modes = 0;
  int nmax = 0;
  std::map<std::vector<int>, Complex> amp;
  bool overflow = false;  // a creation hit the particle-number shell
};

struct NonUnitarityReport {
  Complex omega0;      // boundary frequency, trace of h v over trace of v
  double trace_abs2;   // |trace of v_t|^2
  double rate;         // d/dt of the squared coherent norm at the boundary
};

struct FactorReport {
  std::vector<double> coeff;    // overlap of the atom impulse with mode n
  std::vector<double> partial;  // running sum of the squares
  double lead = 0.0;            // predicted n * coeff_n^2 limit
};

Complex inner_plus(const OneParticleVector& v, const OneParticleVector& w);

// Split coefficient data into frequency parts and put them back together.
SplitCoeffs split_coefficients(const std::vector<Complex>& q,
                               const std::vector<Complex>& p,
                               const ModeTable& table);
void reassemble_coefficients(const SplitCoeffs& s, const ModeTable& table,
                             std::vector<Complex>& q, std::vector<Complex>& p);

// The positive-frequency label of real Cauchy data, via mode projection.
OneParticleVector positive_frequency_split(const CauchyData& data,
                                           const ModeTable& table,
                                           double tol = 1e-10);

FockState vacuum(int modes, int nmax);

double norm2(const FockState& s);
Complex fock_inner(const FockState& a, const FockState& b);

// u joined symmetrically onto every term (linear in u); amplitudes pushed
// past the shell are dropped and flagged on the result.
FockState create(const OneParticleVector& u, const FockState& s);

// The adjoint of create; antilinear in u.
FockState annihilate(const OneParticleVector& u, const FockState& s);

// Truncated coherent vector for the label v.  The dropped tail has norm
// bounded by the usual factorial estimate; if that bound exceeds tail_tol
// the truncation is refused instead of silently degrading.
FockState coherent_state(const OneParticleVector& v, int nmax,
                         double tail_tol = 1e-8);

// The lift of a one-particle map T, given by its action on the basis:
// columns[i] = T e_i.  Acts factor by factor on each symmetric word.
FockState second_quantize_map(const std::vector<OneParticleVector>& columns,
                              const FockState& s);

// Diagonal lift of a one-particle observable with the given eigenvalues:
// each occupation tuple picks up the sum of its occupied eigenvalues.
// All ones gives the particle-number operator.
FockState lifted_hamiltonian(const std::vector<double>& eigenvalues,
                             const FockState& s);

// Rotate a label by exp(-i t h) with h the diagonal frequency operator.
OneParticleVector evolve_label(const OneParticleVector& v,
                               const std::vector<double>& eigenvalues,
                               double t);

// Boundary-trace frequency of an evolving label and the growth rate of the
// boundary coherent state's squared norm.  A nonzero imaginary part is the
// signature that the boundary dynamics fails to be unitary.
NonUnitarityReport trace_nonunitarity_rate(const OneParticleVector& v0,
                                           double t, const ModeTable& table);

// Overlaps of the pure left-atom impulse with the positive-frequency basis
// and their running square sums; the squares shrink only like 1/n, so the
// sum tracks a logarithm instead of converging.
FactorReport factorization_diagnostic(const ModeTable& table, int n);

}  // namespace mustring
