#include "mustring/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "mustring/bogoliubov.hpp"
#include "mustring/dynamics.hpp"
#include "mustring/fock.hpp"
#include "mustring/model.hpp"
#include "mustring/mu_space.hpp"
#include "mustring/param_mech.hpp"
#include "mustring/spectrum.hpp"

namespace mustring {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Collects sub-checks of one criterion: the worst miss wins the verdict and
// every named quantity lands in the detail line.
struct Tally {
  bool ok = true;
  std::string detail;

  void note(const std::string& s) {
    if (!detail.empty()) detail += ", ";
    detail += s;
  }
  void bound(const std::string& what, double got, double limit) {
    note(what + " " + sci(got) + " (limit " + sci(limit) + ")");
    if (!(got <= limit)) ok = false;
  }
  void flag(const std::string& what, bool got, bool want) {
    note(what + " " + (got ? "yes" : "no"));
    if (got != want) ok = false;
  }
};

// The parameter set most of the battery runs on: masses and springs light
// enough that both atom weights exist.
StringParams atom_params() {
  StringParams p;
  p.m0 = p.ml = 0.5;
  p.k0 = p.kl = 0.2;
  return p;
}

Complex rand_c(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

OneParticleVector rand_vec(int m, std::mt19937& rng, double scale) {
  OneParticleVector v;
  for (int i = 0; i < m; ++i) v.c.push_back(scale * rand_c(rng));
  return v;
}

double dist(const FockState& a, const FockState& b) {
  const Complex aa = fock_inner(a, a), bb = fock_inner(b, b);
  const Complex ab = fock_inner(a, b);
  const double d2 = std::real(aa) + std::real(bb) - 2.0 * std::real(ab);
  return std::sqrt(std::max(d2, 0.0));
}

// ---- criterion bodies ------------------------------------------------------

// 1. With no masses and no springs the secular function reduces to
//    w^2 sin(w ell) and the ladder must land exactly on multiples of pi/ell.
void bare_ladder(Tally& t) {
  StringParams p;
  p.m0 = p.ml = p.k0 = p.kl = 0.0;
  p.ell = 1.25;
  const DerivedConstants d = reduce(p);

  double worst = 0.0;
  for (int m = 1; m <= 50; ++m) {
    double lo = (m - 0.5) * M_PI / p.ell, hi = (m + 0.5) * M_PI / p.ell;
    double flo = freq_eq(d, lo);
    for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = freq_eq(d, mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((flo < 0.0) != (fm < 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    const double root = 0.5 * (lo + hi);
    worst = std::max(worst, std::abs(root - m * M_PI / p.ell));
  }
  t.bound("max |root - m pi/ell|", worst, 1e-10);
}

// 2. Both-mass frequency correction: the residual against the 1/m term,
//    scaled by m^3, must stay bounded with no growing trend.
void cubic_correction(Tally& t) {
  const StringParams base;
  const ModeTable table = find_modes(base, 200);
  const DerivedConstants& d = table.d;

  double thirds[3] = {0.0, 0.0, 0.0};
  for (int m = 50; m <= 200; ++m) {
    const Mode& md = table.by_interval(m);
    const double pred =
        m * M_PI / d.ell + (d.mu0 + d.mul) / (d.mu0 * d.mul * M_PI * m);
    const double scaled = std::abs(md.omega - pred) * m * m * m;
    thirds[m < 100 ? 0 : m < 150 ? 1 : 2] =
        std::max(thirds[m < 100 ? 0 : m < 150 ? 1 : 2], scaled);
  }
  t.bound("max residual * m^3", std::max({thirds[0], thirds[1], thirds[2]}), 1.0);
  // The scaled residual settles onto a constant from below, so consecutive
  // block maxima creep by a few parts in 1e7; a 0.1% allowance separates
  // that from any real growth, which would show as factors.
  t.bound("mid/first block ratio", thirds[1] / thirds[0], 1.001);
  t.bound("last/mid block ratio", thirds[2] / thirds[1], 1.001);
}

// 3. Norm growth: m^2/gm against its closed-form limit at m = 200, and the
//    closed form for gm^2 against direct quadrature on the first 30 modes.
void norm_growth(Tally& t) {
  const StringParams base;
  const ModeTable table = find_modes(base, 200);
  const DerivedConstants& d = table.d;

  const Mode& far = table.by_interval(200);
  const double limit =
      std::sqrt(2.0) * std::pow(d.ell, 1.5) / (d.mu0 * M_PI * M_PI);
  const double got = 200.0 * 200.0 / far.gm;
  t.bound("limit rel error at m=200", std::abs(got - limit) / limit, 0.01);

  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double w = table.modes[i].omega;
    const double closed = gm2_closed_form(d, w);
    const double quad = gm2_quadrature(d, w, 1e-12);
    worst = std::max(worst, std::abs(closed - quad) / quad);
  }
  t.bound("closed form vs quadrature rel", worst, 1e-8);
}

// 4. The normalized modes are an orthonormal family of eigenvectors of the
//    measure Laplacian.
void orthonormal_eigenvectors(Tally& t) {
  const ModeTable table = find_modes(atom_params(), 35);
  const DerivedConstants& d = table.d;
  const int n = 30;

  std::vector<MuFunction> hats;
  for (int i = 0; i < n; ++i) hats.push_back(make_hat_mode(d, table.modes[i]));

  double gram_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double g = modified_inner(hats[i], hats[j], d, 1e-10);
      gram_dev = std::max(gram_dev, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  t.bound("max |Gram - I|", gram_dev, 1e-8);

  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w2 = table.modes[i].omega * table.modes[i].omega;
    const MuFunction lap = laplacian_mu(hats[i], d);
    double sup = std::max(std::abs(lap.v0 + w2 * hats[i].v0),
                          std::abs(lap.vl + w2 * hats[i].vl));
    for (int k = 0; k <= 100; ++k) {
      const double x = d.ell * k / 100.0;
      sup = std::max(sup, std::abs(lap.interior(x) + w2 * hats[i].interior(x)));
    }
    resid = std::max(resid, sup / w2);
  }
  t.bound("max eigen residual / w^2", resid, 1e-8);
}

// 5. Endpoint completeness: the atom-weighted square sum reaches 1 at the
//    truncation the 1/m^2 tail estimate picks, and the cross sum stays
//    small there. The estimate is leading order, so it is asked to predict
//    for half the tolerance and then held to its own value within a factor
//    of two.
void endpoint_completeness(Tally& t) {
  const StringParams p = atom_params();
  const DerivedConstants d = derive_constants(p);

  int nstar = 1;
  while (completeness_tail_estimate(d, End::Left, nstar) > 0.01) ++nstar;
  const double est = completeness_tail_estimate(d, End::Left, nstar);
  const ModeTable table = find_modes(p, nstar + 10);

  const double dev = std::abs(completeness_end_sum(table, End::Left, nstar) - 1.0);
  const double cross = std::abs(completeness_cross_sum(table, nstar));
  t.note("N* = " + std::to_string(nstar));
  t.bound("|end sum - 1|", dev, 0.02);
  t.bound("|cross sum|", cross, 0.02);
  t.bound("deviation / estimate", dev / est, 2.0);
}

// 6. The atom-impulse overlaps refuse to be square-summable: n times the
//    squared overlap holds its predicted constant and the partial sums
//    track that constant times log N.
void impulse_log_growth(Tally& t, bool quick) {
  const int top = quick ? 2000 : 10000;
  const ModeTable table = find_modes(atom_params(), top + 50);
  const FactorReport rep = factorization_diagnostic(table, top);

  const double tail = 2000.0 * rep.coeff[1999] * rep.coeff[1999];
  t.bound("n coeff^2 rel miss at n=2000", std::abs(tail - rep.lead) / rep.lead,
          0.05);

  double worst = 0.0;
  for (const int n : {1000, 2000, 5000, 10000}) {
    if (n > top) continue;
    const double want = rep.lead * std::log(static_cast<double>(n));
    worst = std::max(worst, std::abs(rep.partial[n - 1] - want) / want);
  }
  t.bound("worst log-law rel miss", worst, 0.10);
}

// 7. Coherent algebra on random labels: overlap exponentiation, the
//    annihilation eigenvector identity, factorization across a mode split,
//    and the intertwining of lifted maps with coherent states.
void coherent_algebra(Tally& t, unsigned seed) {
  std::mt19937 rng(seed);
  const int nmax = 24;

  const auto v = rand_vec(2, rng, 0.4);
  const auto w = rand_vec(2, rng, 0.4);
  const FockState sv = coherent_state(v, nmax);
  const FockState sw = coherent_state(w, nmax);
  t.note("shell " + std::to_string(nmax));
  t.bound("|overlap - exp|", std::abs(fock_inner(sv, sw) - std::exp(inner_plus(v, w))),
          1e-8);

  const auto u = rand_vec(2, rng, 1.0);
  FockState scaled = sv;
  const Complex eig = inner_plus(u, v);
  for (auto& [key, amp] : scaled.amp) amp *= eig;
  t.bound("annihilation eigenvector miss", dist(annihilate(u, sv), scaled), 1e-10);

  const auto u2 = rand_vec(2, rng, 0.4);
  const auto w1 = rand_vec(1, rng, 0.4);
  const auto w2 = rand_vec(1, rng, 0.4);
  OneParticleVector f1, f2;
  f1.c = {v.c[0], v.c[1], w1.c[0]};
  f2.c = {u2.c[0], u2.c[1], w2.c[0]};
  const Complex whole = fock_inner(coherent_state(f1, 22), coherent_state(f2, 22));
  const Complex left = fock_inner(coherent_state(v, 22), coherent_state(u2, 22));
  const Complex right = fock_inner(coherent_state(w1, 22), coherent_state(w2, 22));
  t.bound("factorization miss", std::abs(whole - left * right), 1e-8);

  double lift_worst = 0.0;
  for (int round = 0; round < 3; ++round) {
    const auto label = rand_vec(2, rng, 0.35);
    std::vector<OneParticleVector> cols(2);
    for (auto& c : cols) c = rand_vec(2, rng, 0.5);
    OneParticleVector mapped;
    mapped.c.assign(2, 0.0);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) mapped.c[i] += cols[j].c[i] * label.c[j];
    const double miss = dist(second_quantize_map(cols, coherent_state(label, 20)),
                             coherent_state(mapped, 20));
    lift_worst = std::max(lift_worst, miss);
  }
  t.bound("lifted map vs relabeled coherent", lift_worst, 1e-8);
}

// 8. Boundary trace: one mode keeps its norm, two beating modes leak, and
//    the closed-form rate agrees with differencing the truncated norm.
void boundary_rate(Tally& t) {
  const ModeTable table = find_modes(atom_params(), 6);
  const int count = table.count();

  OneParticleVector single;
  single.c.assign(count, 0.0);
  single.c[2] = Complex(0.7, 0.3);
  t.bound("single-mode |rate|",
          std::abs(trace_nonunitarity_rate(single, 0.9, table).rate), 1e-12);

  OneParticleVector pair;
  pair.c.assign(count, 0.0);
  pair.c[0] = 1.0;
  pair.c[1] = 1.0;
  const double im = std::abs(
      std::imag(trace_nonunitarity_rate(pair, 0.4, table).omega0));
  t.note("two-mode |Im omega0| " + sci(im));
  if (!(im > 1e-3)) t.ok = false;

  OneParticleVector probe;
  probe.c.assign(count, 0.0);
  probe.c[0] = Complex(0.8, 0.0);
  probe.c[2] = Complex(0.3, 0.5);
  const double tt = 0.7, h = 1e-5;
  const auto mid = trace_nonunitarity_rate(probe, tt, table);
  const auto lo = trace_nonunitarity_rate(probe, tt - h, table);
  const auto hi = trace_nonunitarity_rate(probe, tt + h, table);
  auto truncated_norm = [](double x2) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n <= 40; ++n) {
      term *= x2 / n;
      sum += term;
    }
    return sum;
  };
  const double fd =
      (truncated_norm(hi.trace_abs2) - truncated_norm(lo.trace_abs2)) / (2.0 * h);
  t.bound("rate vs finite difference rel",
          std::abs(mid.rate - fd) / std::max(1.0, std::abs(mid.rate)), 1e-5);
}

// 9. The slice pairing is orthonormal in the frequency-split sense on a flat
//    slice and indifferent to bending the slice.
void slice_pairing(Tally& t) {
  BoundaryCondition bc;
  bc.kind = BcKind::Robin;
  bc.r0 = bc.rl = 1.0;
  const ExpModeBasis basis = exp_modes(bc, 16, 1.0);
  const Embedding flat = flat_embedding(1.0);

  auto one_hot = [&](int k, bool positive) {
    ModeSolution s;
    s.pos.assign(16, 0.0);
    s.neg.assign(16, 0.0);
    (positive ? s.pos : s.neg)[k] = 1.0;
    return s;
  };

  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    for (int l = 0; l < 16; ++l) {
      const double delta = k == l ? 1.0 : 0.0;
      const Complex pp =
          kg_pairing(basis, one_hot(k, true), one_hot(l, true), flat);
      const Complex mm =
          kg_pairing(basis, one_hot(k, false), one_hot(l, false), flat);
      const Complex pm =
          kg_pairing(basis, one_hot(k, true), one_hot(l, false), flat);
      worst = std::max({worst, std::abs(pp - delta), std::abs(mm + delta),
                        std::abs(pm)});
    }
  }
  t.bound("max pairing miss on flat", worst, 1e-8);

  const Embedding tilted = tilted_embedding(1.0, 0.35, End::Right);
  double drift = 0.0;
  const int picks[5][2] = {{0, 0}, {3, 5}, {7, 2}, {12, 12}, {15, 9}};
  for (const auto& kl : picks) {
    const auto a = one_hot(kl[0], true);
    const auto bpos = one_hot(kl[1], true);
    const auto bneg = one_hot(kl[1], false);
    drift = std::max(drift, std::abs(kg_pairing(basis, a, bpos, tilted) -
                                     kg_pairing(basis, a, bpos, flat)));
    drift = std::max(drift, std::abs(kg_pairing(basis, a, bneg, tilted) -
                                     kg_pairing(basis, a, bneg, flat)));
  }
  t.bound("max drift on tilted slice", drift, 1e-6);
}

// 10. Slice-change coefficients: nothing mixes between identical or merely
//     time-shifted flat slices; a boundary tilt is non-unitary with every
//     dyadic increment above the floor; a slope-matched bump is unitary
//     with collapsing increments.
void slice_change(Tally& t, bool quick) {
  const int top = quick ? 40 : 80;
  BoundaryCondition bc;
  const ExpModeBasis basis = exp_modes(bc, top, 1.0);
  const QuadControl qc;

  const Embedding shifted = flat_embedding(1.0, 0.3);
  double mx = 0.0;
  for (int l = 0; l < 10; ++l)
    for (int m = 0; m < 10; ++m)
      mx = std::max(mx, std::abs(beta(shifted, shifted, basis, l, m, qc)));
  t.bound("identical slices max |beta|", mx, 1e-8);

  const Embedding f0 = flat_embedding(1.0, 0.0);
  const Embedding f4 = flat_embedding(1.0, 0.4);
  mx = 0.0;
  for (int l = 0; l < 10; ++l)
    for (int m = 0; m < 10; ++m)
      mx = std::max(mx, std::abs(beta(f0, f4, basis, l, m, qc)));
  t.bound("flat-to-flat max |beta|", mx, qc.tol);

  const auto leak =
      unitarity_classification(f0, tilted_embedding(1.0, 0.3, End::Right),
                               basis, top, 0, qc);
  t.flag("tilted called non-unitary", !leak.unitary, true);
  t.flag("tilted floor positive", leak.floor > 0.0, true);
  double min_inc = leak.increment.empty() ? -1.0 : leak.increment.front();
  for (const double inc : leak.increment) min_inc = std::min(min_inc, inc);
  t.note("tilted min increment " + sci(min_inc) + " vs floor " + sci(leak.floor));
  if (!(min_inc >= leak.floor)) t.ok = false;

  const auto settle = unitarity_classification(
      f0, bump_embedding(1.0, 0.02), basis, top, 0, qc);
  t.flag("bump called unitary", settle.unitary, true);
  bool decreasing = !settle.increment.empty();
  for (size_t i = 0; i + 1 < settle.increment.size(); ++i)
    if (!(settle.increment[i + 1] < settle.increment[i])) decreasing = false;
  t.flag("bump increments decreasing", decreasing, true);
  if (!settle.increment.empty())
    t.note("bump increments " + sci(settle.increment.front()) + " .. " +
           sci(settle.increment.back()));
}

// 11. Classical dynamics: the measure-calculus energy of an evolving state
//     is constant, the two-mass limit matches an independent RK4 run, and
//     the constraint chain closes on mode data through third order.
void string_dynamics(Tally& t) {
  const ModeTable table = find_modes(atom_params(), 40);
  const DerivedConstants& d = table.d;

  const CauchyData start = gaussian_data(d);
  const ModeCoeffs c = project(start, table, 1e-10);
  const double e0 = energy(synthesize(c, table), d, 1e-10);
  double drift = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double e =
        energy(synthesize(coeffs_at(c, table, double(k)), table), d, 1e-10);
    drift = std::max(drift, std::abs(e - e0));
  }
  t.bound("energy drift over t in [0,10]", drift / std::max(1.0, std::abs(e0)),
          1e-8);

  StringParams duo;
  duo.rho = 0.0;
  duo.k0 = duo.kl = 0.0;
  duo.m0 = 1.5;
  duo.ml = 0.7;
  duo.gamma = 2.0;
  duo.ell = 1.3;
  TwoMassState ic;
  ic.q0 = 0.3;
  ic.v0 = -0.2;
  ic.ql = 1.1;
  ic.vl = 0.4;
  const double horizon = 2.0;
  const int steps = 20000;
  const double h = horizon / steps;
  const double pull = duo.gamma / duo.ell;
  double y[4] = {ic.q0, ic.v0, ic.ql, ic.vl};
  auto deriv = [&](const double* s, double* out) {
    out[0] = s[1];
    out[1] = pull * (s[2] - s[0]) / duo.m0;
    out[2] = s[3];
    out[3] = pull * (s[0] - s[2]) / duo.ml;
  };
  for (int i = 0; i < steps; ++i) {
    double k1[4], k2[4], k3[4], k4[4], tmp[4];
    deriv(y, k1);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    deriv(tmp, k2);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    deriv(tmp, k3);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
    deriv(tmp, k4);
    for (int j = 0; j < 4; ++j)
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  const TwoMassState closed = two_mass_limit(duo, ic, horizon);
  const double mass_miss =
      std::max(std::abs(closed.q0 - y[0]), std::abs(closed.ql - y[2]));
  t.bound("two-mass closed form vs RK4", mass_miss, 1e-9);

  const ModeCoeffs pairc = two_mode_coeffs(table, 1, 0.8, 4, 0.5);
  const ConstraintChain chain = constraint_chain(pairc, table, 3, 0.7);
  double worst = 0.0;
  auto fold = [&](const Residual& r) {
    worst = std::max(worst, std::abs(r.value) / std::max(1.0, r.scale));
  };
  for (const EndChain* e : {&chain.left, &chain.right}) {
    fold(e->c1);
    fold(e->c2);
    fold(e->c3);
    for (const Residual& r : e->on_q) fold(r);
    for (const Residual& r : e->on_p) fold(r);
  }
  t.bound("constraint chain residual to K=3", worst, 1e-8);
}

// 12. Parametrized particle: the clock gauge drops out of the motion, the
//     energy observable ignores the gauge slice, and reconstructed energies
//     vanish identically.
void clock_gauge(Tally& t) {
  const double mass = 2.0;
  const Potential spring = harmonic_potential(3.0);
  PMState start;
  start.q = 1.0;
  start.t = 0.0;
  start.p = 0.0;

  const Trajectory plain =
      integrate_orbit(start, unit_lapse(), mass, spring, 0.0, 10.0, 10000);
  const Trajectory wavy =
      integrate_orbit(start, wavy_lapse(0.5), mass, spring, 0.0, 10.0, 20000);

  double gauge_miss = 0.0;
  double e_lo = 0.0, e_hi = 0.0;
  bool first = true;
  for (double tau = 0.3; tau < 9.8; tau += 0.47) {
    const auto a = gauge_fix(plain, tau);
    const auto b = gauge_fix(wavy, tau);
    gauge_miss = std::max({gauge_miss, std::abs(a.first - b.first),
                           std::abs(a.second - b.second)});
    const double e = observable(a.first, a.second, ObservableKind::Energy, mass,
                                spring);
    if (first) {
      e_lo = e_hi = e;
      first = false;
    } else {
      e_lo = std::min(e_lo, e);
      e_hi = std::max(e_hi, e);
    }
  }
  t.bound("lapse invariance of (q,p) at fixed clock", gauge_miss, 1e-6);
  t.bound("energy spread across gauge slices", e_hi - e_lo, 1e-8);

  const Potential quartic = quartic_potential(0.8);
  PMState seed2;
  seed2.q = 0.6;
  seed2.t = 0.0;
  seed2.p = 0.4;
  const Trajectory orbit =
      integrate_orbit(seed2, wavy_lapse(0.4), mass, quartic, 0.0, 6.0, 12000);
  const Lapse lapse = wavy_lapse(0.4);
  double zero_miss = 0.0;
  for (size_t i = 0; i < orbit.size(); i += 113) {
    const auto& pt = orbit[i];
    const PMTangent y =
        hamiltonian_field(pt.state, pt.s, lapse, mass, quartic);
    if (y.yt == 0.0) continue;
    zero_miss = std::max(
        zero_miss, std::abs(parametrized_energy(pt.state.q, y.yq, y.yt, mass,
                                                quartic)));
  }
  t.bound("reconstructed energy", zero_miss, 1e-12);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool quick, unsigned seed) {
  using Clock = std::chrono::steady_clock;
  std::vector<CriterionResult> rows;

  auto run = [&](int number, const char* name, double budget, auto&& body) {
    CriterionResult row;
    row.number = number;
    row.name = name;
    Tally tally;
    const auto t0 = Clock::now();
    try {
      body(tally);
    } catch (const std::exception& e) {
      tally.ok = false;
      tally.note(std::string("threw: ") + e.what());
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (row.seconds > budget) {
      tally.ok = false;
      tally.note("over budget " + sci(budget) + " s");
    }
    row.pass = tally.ok;
    row.detail = tally.detail;
    rows.push_back(std::move(row));
  };

  run(1, "spring-free roots land on the pi ladder", 1.0,
      [&](Tally& t) { bare_ladder(t); });
  run(2, "frequency correction decays at cubic order", 5.0,
      [&](Tally& t) { cubic_correction(t); });
  run(3, "norm growth matches its leading law", 10.0,
      [&](Tally& t) { norm_growth(t); });
  run(4, "modes are orthonormal eigenvectors", 20.0,
      [&](Tally& t) { orthonormal_eigenvectors(t); });
  run(5, "endpoint sums converge where predicted", 10.0,
      [&](Tally& t) { endpoint_completeness(t); });
  run(6, "impulse overlaps grow like the log", 30.0,
      [&](Tally& t) { impulse_log_growth(t, quick); });
  run(7, "coherent algebra identities", 10.0,
      [&](Tally& t) { coherent_algebra(t, seed); });
  run(8, "boundary trace leaks norm at the stated rate", 10.0,
      [&](Tally& t) { boundary_rate(t); });
  run(9, "slice pairing is orthonormal and slice-blind", 30.0,
      [&](Tally& t) { slice_pairing(t); });
  run(10, "slice change splits into unitary and not", 300.0,
      [&](Tally& t) { slice_change(t, quick); });
  run(11, "string dynamics conserves and constrains", 30.0,
      [&](Tally& t) { string_dynamics(t); });
  run(12, "clock choice drops out of particle motion", 5.0,
      [&](Tally& t) { clock_gauge(t); });

  return rows;
}

void print_acceptance(const std::vector<CriterionResult>& rows,
                      std::ostream& out) {
  for (const CriterionResult& row : rows) {
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d %-46s %7.2fs  ",
                  row.pass ? "PASS" : "FAIL", row.number, row.name.c_str(),
                  row.seconds);
    out << head << row.detail << "\n";
  }
  int passed = 0;
  for (const CriterionResult& row : rows) passed += row.pass ? 1 : 0;
  out << passed << "/" << rows.size() << " criteria passed\n";
}

bool all_passed(const std::vector<CriterionResult>& rows) {
  for (const CriterionResult& row : rows)
    if (!row.pass) return false;
  return !rows.empty();
}

}  // namespace mustring
