#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "mustring/fock.hpp"

using namespace mustring;

namespace {

StringParams solvable() {
  StringParams p;
  p.m0 = p.ml = 0.5;
  p.k0 = p.kl = 0.2;
  return p;
}

Complex rand_c(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

OneParticleVector rand_vec(int m, std::mt19937& rng, double scale = 1.0) {
  OneParticleVector v;
  for (int i = 0; i < m; ++i) {
    v.c.push_back(scale * rand_c(rng));
  }
  return v;
}

// random amplitudes on every occupation tuple with at most cap particles
void fill_random(FockState& s, int cap, std::mt19937& rng) {
  std::vector<int> key(s.modes, 0);
  std::function<void(int, int)> walk = [&](int slot, int left) {
    if (slot == s.modes) {
      s.amp[key] = rand_c(rng);
      return;
    }
    for (int n = 0; n <= left; ++n) {
      key[slot] = n;
      walk(slot + 1, left - n);
    }
    key[slot] = 0;
  };
  walk(0, cap);
}

FockState rand_state(int modes, int nmax, int cap, std::mt19937& rng) {
  FockState s = vacuum(modes, nmax);
  s.amp.clear();
  fill_random(s, cap, rng);
  return s;
}

// permanent by direct expansion over permutations; n stays tiny here
Complex permanent(const std::vector<std::vector<Complex>>& m) {
  const size_t n = m.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  Complex sum = 0.0;
  do {
    Complex prod = 1.0;
    for (size_t i = 0; i < n; ++i) prod *= m[i][idx[i]];
    sum += prod;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return sum;
}

double dist2(const FockState& a, const FockState& b) {
  // ||a - b||^2 through the sesquilinear form
  const Complex aa = fock_inner(a, a), bb = fock_inner(b, b);
  const Complex ab = fock_inner(a, b);
  return std::real(aa) + std::real(bb) - 2.0 * std::real(ab);
}

}  // namespace

TEST_CASE("frequency split and reassembly are inverse to each other") {
  const auto t = find_modes(solvable(), 6);
  std::mt19937 rng(1234);
  std::vector<Complex> q, p;
  for (size_t i = 0; i < t.modes.size(); ++i) {
    q.push_back(rand_c(rng));
    p.push_back(rand_c(rng));
  }
  const auto s = split_coefficients(q, p, t);
  std::vector<Complex> q2, p2;
  reassemble_coefficients(s, t, q2, p2);
  for (size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(q[i] - q2[i]) < 1e-14);
    CHECK(std::abs(p[i] - p2[i]) < 1e-14);
  }
}

TEST_CASE("real data splits into conjugate halves") {
  const auto t = find_modes(solvable(), 6);
  std::vector<Complex> q, p;
  for (size_t i = 0; i < t.modes.size(); ++i) {
    q.push_back(0.3 * (i + 1.0));
    p.push_back(-0.1 * (i + 0.5));
  }
  const auto s = split_coefficients(q, p, t);
  for (size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(s.neg[i] - std::conj(s.pos[i])) < 1e-14);
  }
}

TEST_CASE("static data splits with the root-frequency weight") {
  const auto t = find_modes(solvable(), 6);
  std::vector<Complex> q(t.modes.size(), 0.0), p(t.modes.size(), 0.0);
  q[2] = 0.8;
  const auto s = split_coefficients(q, p, t);
  const double w = t.modes[2].omega;
  CHECK(std::abs(s.pos[2] - std::sqrt(0.5 * w) * 0.8) < 1e-14);
  CHECK(std::abs(s.neg[2] - s.pos[2]) < 1e-14);
}

TEST_CASE("a label of pure positive frequency has no negative half") {
  const auto t = find_modes(solvable(), 6);
  std::mt19937 rng(7);
  std::vector<Complex> q, p;
  const Complex i(0.0, 1.0);
  for (size_t n = 0; n < t.modes.size(); ++n) {
    q.push_back(rand_c(rng));
    p.push_back(i * t.modes[n].omega * q.back());
  }
  const auto s = split_coefficients(q, p, t);
  for (const Complex& z : s.neg) {
    CHECK(std::abs(z) < 1e-14);
  }
  // and the squared norm in the normalized basis matches the weighted sum
  OneParticleVector v{s.pos};
  double weighted = 0.0;
  for (size_t n = 0; n < q.size(); ++n) {
    weighted += 2.0 * t.modes[n].omega * std::norm(q[n]);
  }
  CHECK(std::real(inner_plus(v, v)) == doctest::Approx(weighted).epsilon(1e-12));
}

TEST_CASE("splitting a single synthesized mode lights one entry") {
  const auto t = find_modes(solvable(), 6);
  const auto data = synthesize(single_mode_coeffs(t, 3, 0.9), t);
  const auto v = positive_frequency_split(data, t);
  for (size_t n = 0; n < v.c.size(); ++n) {
    if (n == 3) {
      const double w = t.modes[3].omega;
      CHECK(std::abs(v.c[n] - std::sqrt(0.5 * w) * 0.9) < 1e-9);
    } else {
      CHECK(std::abs(v.c[n]) < 1e-9);
    }
  }
}

TEST_CASE("creation from the vacuum embeds the label") {
  std::mt19937 rng(99);
  const auto u = rand_vec(3, rng);
  const auto s = create(u, vacuum(3, 4));
  CHECK(s.amp.size() == 3);
  CHECK(std::abs(s.amp.at({1, 0, 0}) - u.c[0]) < 1e-15);
  CHECK(std::abs(s.amp.at({0, 1, 0}) - u.c[1]) < 1e-15);
  CHECK(std::abs(s.amp.at({0, 0, 1}) - u.c[2]) < 1e-15);
  CHECK_FALSE(s.overflow);
}

TEST_CASE("annihilation kills the vacuum") {
  std::mt19937 rng(5);
  const auto u = rand_vec(3, rng);
  const auto s = annihilate(u, vacuum(3, 4));
  CHECK(norm2(s) == 0.0);
}

TEST_CASE("creation and annihilation are adjoint") {
  std::mt19937 rng(2024);
  const auto u = rand_vec(3, rng);
  const auto x = rand_state(3, 4, 3, rng);  // stays off the shell
  const auto y = rand_state(3, 4, 4, rng);
  const Complex lhs = fock_inner(create(u, x), y);
  const Complex rhs = fock_inner(x, annihilate(u, y));
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("the commutation relation holds below the shell") {
  std::mt19937 rng(31);
  const auto u = rand_vec(3, rng);
  const auto w = rand_vec(3, rng);
  const auto x = rand_state(3, 5, 4, rng);
  const auto first = annihilate(u, create(w, x));
  const auto second = create(w, annihilate(u, x));
  const Complex want = inner_plus(u, w);
  // first - second should be want * x
  FockState diff = first;
  for (const auto& [key, amp] : second.amp) diff.amp[key] -= amp;
  FockState scaled = x;
  for (auto& [key, amp] : scaled.amp) amp *= want;
  CHECK(dist2(diff, scaled) < 1e-12);
}

TEST_CASE("overlaps of symmetric words are permanents") {
  std::mt19937 rng(442);
  const int n = 3;
  std::vector<OneParticleVector> us, ws;
  for (int i = 0; i < n; ++i) {
    us.push_back(rand_vec(3, rng));
    ws.push_back(rand_vec(3, rng));
  }
  FockState left = vacuum(3, n), right = vacuum(3, n);
  for (int i = 0; i < n; ++i) {
    left = create(us[i], left);
    right = create(ws[i], right);
  }
  std::vector<std::vector<Complex>> gram(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      gram[i][j] = inner_plus(us[i], ws[j]);
    }
  }
  CHECK(std::abs(fock_inner(left, right) - permanent(gram)) < 1e-12);
}

TEST_CASE("the empty label gives the bare vacuum") {
  OneParticleVector zero;
  zero.c.assign(2, 0.0);
  const auto s = coherent_state(zero, 6);
  CHECK(std::abs(fock_inner(s, vacuum(2, 6)) - 1.0) < 1e-15);
  CHECK(norm2(s) == doctest::Approx(1.0));
}

TEST_CASE("coherent overlaps exponentiate the label overlap") {
  std::mt19937 rng(17);
  const auto v = rand_vec(2, rng, 0.4);
  const auto w = rand_vec(2, rng, 0.4);
  const auto sv = coherent_state(v, 24);
  const auto sw = coherent_state(w, 24);
  const Complex got = fock_inner(sv, sw);
  const Complex want = std::exp(inner_plus(v, w));
  CHECK(std::abs(got - want) < 1e-8);
}

TEST_CASE("coherent states are annihilation eigenvectors") {
  std::mt19937 rng(18);
  const auto v = rand_vec(2, rng, 0.4);
  const auto u = rand_vec(2, rng);
  const auto sv = coherent_state(v, 24);
  const auto lhs = annihilate(u, sv);
  FockState rhs = sv;
  const Complex eig = inner_plus(u, v);
  for (auto& [key, amp] : rhs.amp) amp *= eig;
  CHECK(dist2(lhs, rhs) < 1e-10);
}

TEST_CASE("an impossible tail bound is refused loudly") {
  OneParticleVector big;
  big.c.assign(2, Complex(2.0, 1.0));  // squared norm 10
  CHECK_THROWS_AS(coherent_state(big, 5), NumericalError);
}

TEST_CASE("lifting the identity changes nothing") {
  std::mt19937 rng(61);
  const auto x = rand_state(3, 4, 4, rng);
  std::vector<OneParticleVector> id(3);
  for (int i = 0; i < 3; ++i) {
    id[i].c.assign(3, 0.0);
    id[i].c[i] = 1.0;
  }
  CHECK(dist2(second_quantize_map(id, x), x) < 1e-24);
}

TEST_CASE("lifted maps intertwine with coherent states") {
  std::mt19937 rng(62);
  const auto v = rand_vec(2, rng, 0.35);
  std::vector<OneParticleVector> cols(2);
  for (auto& c : cols) c = rand_vec(2, rng, 0.5);
  OneParticleVector tv;
  tv.c.assign(2, 0.0);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      tv.c[i] += cols[j].c[i] * v.c[j];
    }
  }
  const auto lhs = second_quantize_map(cols, coherent_state(v, 20));
  const auto rhs = coherent_state(tv, 20);
  CHECK(dist2(lhs, rhs) < 1e-16);
}

TEST_CASE("lifted maps compose") {
  std::mt19937 rng(63);
  std::vector<OneParticleVector> a(2), b(2);
  for (auto& c : a) c = rand_vec(2, rng, 0.6);
  for (auto& c : b) c = rand_vec(2, rng, 0.6);
  // columns of the composition a after b
  std::vector<OneParticleVector> ab(2);
  for (int j = 0; j < 2; ++j) {
    ab[j].c.assign(2, 0.0);
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        ab[j].c[i] += a[k].c[i] * b[j].c[k];
      }
    }
  }
  const auto x = rand_state(2, 4, 4, rng);
  const auto lhs = second_quantize_map(ab, x);
  const auto rhs = second_quantize_map(a, second_quantize_map(b, x));
  CHECK(dist2(lhs, rhs) < 1e-20);
}

TEST_CASE("a unitary one-particle map lifts to a norm-preserving one") {
  std::mt19937 rng(64);
  const double th = 0.83, ph = 0.41;
  std::vector<OneParticleVector> u(2);
  u[0].c = {Complex(std::cos(th), 0.0),
            Complex(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph))};
  u[1].c = {Complex(-std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)),
            Complex(std::cos(th), 0.0)};
  const auto x = rand_state(2, 5, 5, rng);
  CHECK(norm2(second_quantize_map(u, x)) ==
        doctest::Approx(norm2(x)).epsilon(1e-12));
}

TEST_CASE("the all-ones lift counts particles") {
  FockState s = vacuum(3, 5);
  s.amp.clear();
  s.amp[{2, 1, 0}] = 0.6;  // a three-particle state
  const auto ns = lifted_hamiltonian({1.0, 1.0, 1.0}, s);
  CHECK(std::abs(ns.amp.at({2, 1, 0}) - Complex(1.8, 0.0)) < 1e-15);
  const auto nv = lifted_hamiltonian({1.0, 1.0, 1.0}, vacuum(3, 5));
  CHECK(norm2(nv) == 0.0);
}

TEST_CASE("the lifted energy weighs each slot by its frequency") {
  FockState s = vacuum(2, 4);
  s.amp.clear();
  s.amp[{1, 2}] = 1.0;
  const auto hs = lifted_hamiltonian({0.7, 1.9}, s);
  CHECK(std::abs(hs.amp.at({1, 2}) - Complex(0.7 + 3.8, 0.0)) < 1e-14);
}

TEST_CASE("evolved labels keep coherent overlaps frozen") {
  std::mt19937 rng(65);
  const auto v = rand_vec(2, rng, 0.4);
  const auto w = rand_vec(2, rng, 0.4);
  const std::vector<double> eig = {1.3, 2.9};
  const Complex before =
      fock_inner(coherent_state(v, 22), coherent_state(w, 22));
  const auto vt = evolve_label(v, eig, 1.7);
  const auto wt = evolve_label(w, eig, 1.7);
  const Complex after =
      fock_inner(coherent_state(vt, 22), coherent_state(wt, 22));
  CHECK(std::abs(before - after) < 1e-12);
}

TEST_CASE("evolution commutes with the coherent construction") {
  std::mt19937 rng(66);
  const auto v = rand_vec(2, rng, 0.4);
  const std::vector<double> eig = {0.9, 2.2};
  const double t = 0.6;
  std::vector<OneParticleVector> cols(2);
  const Complex i(0.0, 1.0);
  for (int k = 0; k < 2; ++k) {
    cols[k].c.assign(2, 0.0);
    cols[k].c[k] = std::exp(-i * eig[k] * t);
  }
  const auto lhs = second_quantize_map(cols, coherent_state(v, 20));
  const auto rhs = coherent_state(evolve_label(v, eig, t), 20);
  CHECK(dist2(lhs, rhs) < 1e-16);
}

TEST_CASE("overlaps factor across a mode partition") {
  std::mt19937 rng(67);
  const auto u1 = rand_vec(2, rng, 0.4);
  const auto u2 = rand_vec(2, rng, 0.4);
  const auto w1 = rand_vec(1, rng, 0.4);
  const auto w2 = rand_vec(1, rng, 0.4);
  OneParticleVector f1, f2;
  f1.c = {u1.c[0], u1.c[1], w1.c[0]};
  f2.c = {u2.c[0], u2.c[1], w2.c[0]};
  const Complex whole =
      fock_inner(coherent_state(f1, 22), coherent_state(f2, 22));
  const Complex a =
      fock_inner(coherent_state(u1, 22), coherent_state(u2, 22));
  const Complex b =
      fock_inner(coherent_state(w1, 22), coherent_state(w2, 22));
  CHECK(std::abs(whole - a * b) < 1e-8);
}

TEST_CASE("the number operator commutes with any diagonal lift") {
  FockState s = vacuum(2, 5);
  s.amp.clear();
  s.amp[{1, 2}] = 0.4;
  s.amp[{3, 0}] = -0.2;
  const std::vector<double> ones = {1.0, 1.0};
  const std::vector<double> eig = {0.8, 1.7};
  const auto ab = lifted_hamiltonian(ones, lifted_hamiltonian(eig, s));
  const auto ba = lifted_hamiltonian(eig, lifted_hamiltonian(ones, s));
  CHECK(dist2(ab, ba) == 0.0);
}

TEST_CASE("a single mode keeps its boundary norm") {
  const auto t = find_modes(solvable(), 6);
  OneParticleVector v;
  v.c.assign(t.modes.size(), 0.0);
  v.c[2] = Complex(0.7, 0.3);
  const auto rep = trace_nonunitarity_rate(v, 0.9, t);
  CHECK(std::abs(rep.omega0 - Complex(t.modes[2].omega, 0.0)) < 1e-12);
  CHECK(std::abs(rep.rate) < 1e-12);
}

TEST_CASE("two beating modes leak boundary norm") {
  const auto t = find_modes(solvable(), 6);
  OneParticleVector v;
  v.c.assign(t.modes.size(), 0.0);
  v.c[0] = 1.0;
  v.c[1] = 1.0;
  const auto rep = trace_nonunitarity_rate(v, 0.4, t);
  CHECK(std::abs(std::imag(rep.omega0)) > 1e-3);
  CHECK(std::abs(rep.rate) > 1e-3);
}

TEST_CASE("the boundary frequency ignores the label's scale") {
  const auto t = find_modes(solvable(), 6);
  OneParticleVector v, v3;
  v.c.assign(t.modes.size(), 0.0);
  v.c[0] = Complex(0.4, -0.1);
  v.c[3] = Complex(-0.2, 0.9);
  v3 = v;
  for (auto& z : v3.c) z *= Complex(3.0, 0.0);
  const auto a = trace_nonunitarity_rate(v, 1.1, t);
  const auto b = trace_nonunitarity_rate(v3, 1.1, t);
  CHECK(std::abs(a.omega0 - b.omega0) < 1e-12);
}

TEST_CASE("the rate matches a finite difference of the boundary norm") {
  const auto t = find_modes(solvable(), 6);
  OneParticleVector v;
  v.c.assign(t.modes.size(), 0.0);
  v.c[0] = Complex(0.8, 0.0);
  v.c[2] = Complex(0.3, 0.5);
  const double tt = 0.7, h = 1e-5;
  const auto mid = trace_nonunitarity_rate(v, tt, t);
  const auto lo = trace_nonunitarity_rate(v, tt - h, t);
  const auto hi = trace_nonunitarity_rate(v, tt + h, t);
  const double fd =
      (std::exp(hi.trace_abs2) - std::exp(lo.trace_abs2)) / (2.0 * h);
  CHECK(mid.rate == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("atom-impulse overlaps follow the closed form") {
  const auto t = find_modes(solvable(), 30);
  const auto rep = factorization_diagnostic(t, 20);
  // quadrature route: weight times the atom value of the normalized mode
  for (int n : {0, 4, 12, 19}) {
    const auto hat = make_hat_mode(t.d, t.modes[n]);
    MuFunction impulse;
    impulse.v0 = 1.0;
    impulse.vl = 0.0;
    impulse.interior = [](double) { return 0.0; };
    impulse.tag = Smoothness::H1;
    const double via_mu = std::sqrt(2.0 * t.modes[n].omega) *
                          inner_mu(hat, impulse, t.d);
    CHECK(rep.coeff[n] == doctest::Approx(via_mu).epsilon(1e-8));
  }
}

TEST_CASE("the squared overlaps decay like the harmonic series") {
  const auto t = find_modes(solvable(), 2100);
  const auto rep = factorization_diagnostic(t, 2000);
  const double tail = 2000.0 * rep.coeff[1999] * rep.coeff[1999];
  CHECK(std::abs(tail - rep.lead) < 0.05 * rep.lead);
  // partial sums refuse to settle: each doubling adds about lead * ln 2
  for (int n : {500, 1000}) {
    const double inc = rep.partial[2 * n - 1] - rep.partial[n - 1];
    CHECK(inc > 0.5 * rep.lead * std::log(2.0));
  }
}
