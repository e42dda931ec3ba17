#include "mustring/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mustring/mu_space.hpp"

namespace mustring {

namespace {

void check_same_size(size_t a, size_t b, const char* who) {
  if (a != b) {
    throw ValidationError(std::string(who) + ": mode cutoffs do not match");
  }
}

void check_state_pair(const FockState& a, const FockState& b,
                      const char* who) {
  if (a.modes != b.modes || a.nmax != b.nmax) {
    throw ValidationError(std::string(who) + ": state cutoffs do not match");
  }
}

int total(const std::vector<int>& key) {
  int t = 0;
  for (int n : key) t += n;
  return t;
}

double key_weight(const std::vector<int>& key) {
  double w = 1.0;
  for (int n : key) {
    for (int i = 2; i <= n; ++i) w *= i;
  }
  return w;
}

// trace of the n-th positive-frequency basis vector at the left end
double left_trace(const ModeTable& table, size_t n) {
  const Mode& m = table.modes[n];
  return mode_profile(table.d, m.omega, 0.0) /
         (m.gm * std::sqrt(2.0 * m.omega));
}

}  // namespace

Complex inner_plus(const OneParticleVector& v, const OneParticleVector& w) {
  check_same_size(v.c.size(), w.c.size(), "inner_plus");
  Complex s = 0.0;
  for (size_t i = 0; i < v.c.size(); ++i) {
    s += std::conj(v.c[i]) * w.c[i];
  }
  return s;
}

SplitCoeffs split_coefficients(const std::vector<Complex>& q,
                               const std::vector<Complex>& p,
                               const ModeTable& table) {
  check_same_size(q.size(), table.modes.size(), "split_coefficients");
  check_same_size(p.size(), table.modes.size(), "split_coefficients");
  SplitCoeffs out;
  out.pos.resize(q.size());
  out.neg.resize(q.size());
  const Complex i(0.0, 1.0);
  for (size_t n = 0; n < q.size(); ++n) {
    const double w = table.modes[n].omega;
    const double root = std::sqrt(0.5 * w);
    out.pos[n] = root * (q[n] - i * p[n] / w);
    out.neg[n] = root * (q[n] + i * p[n] / w);
  }
  return out;
}

void reassemble_coefficients(const SplitCoeffs& s, const ModeTable& table,
                             std::vector<Complex>& q,
                             std::vector<Complex>& p) {
  check_same_size(s.pos.size(), table.modes.size(), "reassemble_coefficients");
  check_same_size(s.neg.size(), table.modes.size(), "reassemble_coefficients");
  q.resize(s.pos.size());
  p.resize(s.pos.size());
  const Complex i(0.0, 1.0);
  for (size_t n = 0; n < s.pos.size(); ++n) {
    const double w = table.modes[n].omega;
    const double root = std::sqrt(2.0 * w);
    q[n] = (s.pos[n] + s.neg[n]) / root;
    p[n] = i * w * (s.pos[n] - s.neg[n]) / root;
  }
}

OneParticleVector positive_frequency_split(const CauchyData& data,
                                           const ModeTable& table,
                                           double tol) {
  const ModeCoeffs mc = project(data, table, tol);
  std::vector<Complex> q(mc.pos.begin(), mc.pos.end());
  std::vector<Complex> p;
  p.reserve(mc.vel.size());
  for (double v : mc.vel) {
    p.push_back(table.d.rho * v);
  }
  OneParticleVector out;
  out.c = split_coefficients(q, p, table).pos;
  return out;
}

FockState vacuum(int modes, int nmax) {
  if (modes <= 0 || nmax < 0) {
    throw ValidationError("vacuum: cutoffs must be positive");
  }
  FockState s;
  s.modes = modes;
  s.nmax = nmax;
  s.amp[std::vector<int>(modes, 0)] = 1.0;
  return s;
}

double norm2(const FockState& s) {
  double out = 0.0;
  for (const auto& [key, a] : s.amp) {
    out += std::norm(a) * key_weight(key);
  }
  return out;
}

Complex fock_inner(const FockState& a, const FockState& b) {
  check_state_pair(a, b, "fock_inner");
  Complex out = 0.0;
  // walk the sparser map, look up in the other
  const FockState& small = a.amp.size() <= b.amp.size() ? a : b;
  const FockState& big = a.amp.size() <= b.amp.size() ? b : a;
  const bool swapped = &small == &b;
  for (const auto& [key, amp] : small.amp) {
    const auto it = big.amp.find(key);
    if (it == big.amp.end()) continue;
    const Complex lhs = swapped ? it->second : amp;
    const Complex rhs = swapped ? amp : it->second;
    out += std::conj(lhs) * rhs * key_weight(key);
  }
  return out;
}

FockState create(const OneParticleVector& u, const FockState& s) {
  check_same_size(u.c.size(), static_cast<size_t>(s.modes), "create");
  FockState out;
  out.modes = s.modes;
  out.nmax = s.nmax;
  out.overflow = s.overflow;
  for (const auto& [key, amp] : s.amp) {
    if (total(key) + 1 > s.nmax) {
      if (amp != 0.0) out.overflow = true;
      continue;
    }
    for (int i = 0; i < s.modes; ++i) {
      if (u.c[i] == 0.0) continue;
      std::vector<int> up = key;
      ++up[i];
      out.amp[std::move(up)] += u.c[i] * amp;
    }
  }
  return out;
}

FockState annihilate(const OneParticleVector& u, const FockState& s) {
  check_same_size(u.c.size(), static_cast<size_t>(s.modes), "annihilate");
  FockState out;
  out.modes = s.modes;
  out.nmax = s.nmax;
  out.overflow = s.overflow;
  for (const auto& [key, amp] : s.amp) {
    for (int i = 0; i < s.modes; ++i) {
      if (key[i] == 0 || u.c[i] == 0.0) continue;
      std::vector<int> down = key;
      --down[i];
      out.amp[std::move(down)] +=
          std::conj(u.c[i]) * static_cast<double>(key[i]) * amp;
    }
  }
  return out;
}

FockState coherent_state(const OneParticleVector& v, int nmax,
                         double tail_tol) {
  const double z = std::real(inner_plus(v, v));
  // norm of the dropped tail: sum_{n > nmax} z^n / n! <= z^{nmax+1} e^z / (nmax+1)!
  double bound = std::exp(z);
  for (int n = 1; n <= nmax + 1; ++n) {
    bound *= z / n;
  }
  if (!(bound < tail_tol)) {
    throw NumericalError(
        "coherent_state: particle cutoff " + std::to_string(nmax) +
        " leaves a tail of norm^2 about " + std::to_string(bound) +
        ", above the requested tolerance");
  }
  FockState out = vacuum(static_cast<int>(v.c.size()), nmax);
  // build shell by shell: the n-particle part is v joined n times, with
  // 1/n! folded in as 1/n per shell
  FockState shell = out;
  for (int n = 1; n <= nmax; ++n) {
    shell = create(v, shell);
    for (auto& [key, amp] : shell.amp) {
      amp /= n;
    }
    for (const auto& [key, amp] : shell.amp) {
      out.amp[key] += amp;
    }
  }
  out.overflow = false;  // the shell walk never spills by construction
  return out;
}

FockState second_quantize_map(const std::vector<OneParticleVector>& columns,
                              const FockState& s) {
  check_same_size(columns.size(), static_cast<size_t>(s.modes),
                  "second_quantize_map");
  for (const auto& col : columns) {
    check_same_size(col.c.size(), static_cast<size_t>(s.modes),
                    "second_quantize_map");
  }
  FockState out;
  out.modes = s.modes;
  out.nmax = s.nmax;
  out.overflow = s.overflow;
  for (const auto& [key, amp] : s.amp) {
    // each occupied slot is a basis factor; map every factor and rejoin
    FockState word = vacuum(s.modes, s.nmax);
    word.amp.begin()->second = amp;
    for (int i = 0; i < s.modes; ++i) {
      for (int rep = 0; rep < key[i]; ++rep) {
        word = create(columns[i], word);
      }
    }
    for (const auto& [wkey, wamp] : word.amp) {
      out.amp[wkey] += wamp;
    }
  }
  return out;
}

FockState lifted_hamiltonian(const std::vector<double>& eigenvalues,
                             const FockState& s) {
  check_same_size(eigenvalues.size(), static_cast<size_t>(s.modes),
                  "lifted_hamiltonian");
  FockState out = s;
  for (auto& [key, amp] : out.amp) {
    double e = 0.0;
    for (int i = 0; i < s.modes; ++i) {
      e += key[i] * eigenvalues[i];
    }
    amp *= e;
  }
  return out;
}

OneParticleVector evolve_label(const OneParticleVector& v,
                               const std::vector<double>& eigenvalues,
                               double t) {
  check_same_size(eigenvalues.size(), v.c.size(), "evolve_label");
  OneParticleVector out = v;
  const Complex i(0.0, 1.0);
  for (size_t n = 0; n < v.c.size(); ++n) {
    out.c[n] *= std::exp(-i * eigenvalues[n] * t);
  }
  return out;
}

NonUnitarityReport trace_nonunitarity_rate(const OneParticleVector& v0,
                                           double t, const ModeTable& table) {
  check_same_size(v0.c.size(), table.modes.size(), "trace_nonunitarity_rate");
  const Complex i(0.0, 1.0);
  Complex tr = 0.0, trh = 0.0;
  for (size_t n = 0; n < v0.c.size(); ++n) {
    const double w = table.modes[n].omega;
    const Complex vt = v0.c[n] * std::exp(-i * w * t);
    const double g0 = left_trace(table, n);
    tr += vt * g0;
    trh += w * vt * g0;
  }
  if (std::abs(tr) < 1e-300) {
    throw NumericalError(
        "trace_nonunitarity_rate: the boundary trace vanishes");
  }
  NonUnitarityReport out;
  out.omega0 = trh / tr;
  out.trace_abs2 = std::norm(tr);
  out.rate = 2.0 * std::exp(out.trace_abs2) * out.trace_abs2 *
             std::imag(out.omega0);
  return out;
}

FactorReport factorization_diagnostic(const ModeTable& table, int n) {
  if (!table.d.has_measure || table.d.mu0 <= 0.0) {
    throw ValidationError(
        "factorization_diagnostic: needs a left mass and its atom weight");
  }
  if (n <= 0 || static_cast<size_t>(n) > table.modes.size()) {
    throw ValidationError(
        "factorization_diagnostic: table holds fewer modes than requested");
  }
  FactorReport out;
  out.lead = 4.0 * table.d.alpha0 / (M_PI * table.d.mu0);
  out.coeff.reserve(n);
  out.partial.reserve(n);
  const double front = std::sqrt(2.0 * table.d.alpha0 * table.d.mu0);
  double run = 0.0;
  for (int k = 0; k < n; ++k) {
    const Mode& m = table.modes[k];
    const double f = front * std::pow(m.omega, 1.5) / m.gm;
    run += f * f;
    out.coeff.push_back(f);
    out.partial.push_back(run);
  }
  return out;
}

}  // namespace mustring
