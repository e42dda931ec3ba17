#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "mustring/bogoliubov.hpp"
#include "mustring/quadrature.hpp"

using namespace mustring;

namespace {

constexpr double kPi = 3.14159265358979323846;

BoundaryCondition dirichlet() { return {BcKind::Dirichlet, 0.0, 0.0}; }
BoundaryCondition neumann() { return {BcKind::Robin, 0.0, 0.0}; }
BoundaryCondition robin(double r0, double rl) { return {BcKind::Robin, r0, rl}; }

// frequency-equation scale, used to normalize residuals at large omega
double freq_scale(const BoundaryCondition& bc, double w) {
  if (bc.kind == BcKind::Dirichlet) return 1.0;
  return w * w + w * (bc.r0 + bc.rl) + bc.r0 * bc.rl + 1.0;
}

ModeSolution single(int pos, int count, int eta) {
  ModeSolution s;
  s.pos.assign(count, 0.0);
  s.neg.assign(count, 0.0);
  (eta > 0 ? s.pos : s.neg)[pos] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("clamped ends give the sine ladder") {
  const auto basis = exp_modes(dirichlet(), 12, 1.7);
  for (int k = 0; k < 12; ++k) {
    CHECK(basis.modes[k].omega == doctest::Approx((k + 1) * kPi / 1.7).epsilon(1e-13));
  }
  CHECK_FALSE(basis.zero_mode);
  // interior profile is a plain normalized sine
  const double x = 0.61;
  CHECK(basis.profile(3, x) ==
        doctest::Approx(std::sin(basis.modes[3].omega * x) /
                        std::sqrt(basis.modes[3].omega * 1.7))
            .epsilon(1e-12));
}

TEST_CASE("free ends reduce to the cosine ladder plus the constant mode") {
  const auto basis = exp_modes(neumann(), 8, 1.0);
  CHECK(basis.zero_mode);
  CHECK(basis.count() == 9);
  for (int k = 0; k < 8; ++k) {
    CHECK(basis.modes[k].omega == doctest::Approx((k + 1) * kPi).epsilon(1e-12));
  }
  CHECK(basis.profile(0, 0.3) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("spring ends satisfy the frequency equation and boundary rules") {
  const auto bc = robin(0.4, 0.7);
  const auto basis = exp_modes(bc, 25, 1.3);
  for (const auto& m : basis.modes) {
    CHECK(std::abs(frequency_residual(bc, m.omega, 1.3)) <
          1e-12 * freq_scale(bc, m.omega));
    // complex form of the same equation, the one the weights are built for
    const Complex lhs = std::exp(Complex(0.0, m.omega * 1.3)) * m.a0p * m.alp -
                        std::exp(Complex(0.0, -m.omega * 1.3)) * m.a0m * m.alm;
    CHECK(std::abs(lhs) < 1e-11 * freq_scale(bc, m.omega));
  }
  for (int pos = 0; pos < 6; ++pos) {
    const double w = basis.modes[pos].omega;
    CHECK(std::abs(basis.profile_d(pos, 0.0) - 0.4 * basis.profile(pos, 0.0)) <
          1e-10 * w);
    CHECK(std::abs(basis.profile_d(pos, 1.3) + 0.7 * basis.profile(pos, 1.3)) <
          1e-10 * w);
  }
}

TEST_CASE("spring frequencies drift off the multiples as predicted") {
  const auto bc = robin(0.4, 0.7);
  const auto basis = exp_modes(bc, 40, 1.3);
  // each large root sits near a multiple of pi/ell, displaced by
  // (r0 + rl) / (N pi) with a remainder falling off like 1/N^3
  double prev = 1e300;
  for (int pos = 30; pos < 40; ++pos) {
    const double w = basis.modes[pos].omega;
    const double n = std::round(w * 1.3 / kPi);
    const double rem = w - n * kPi / 1.3 - (bc.r0 + bc.rl) / (n * kPi);
    const double scaled = std::abs(rem) * n * n * n;
    CHECK(scaled < 0.2);
    CHECK(scaled < prev * 1.5);  // no systematic growth
    prev = std::max(scaled, 1e-6);
  }
}

TEST_CASE("profiles carry the advertised norm") {
  for (const auto& bc : {dirichlet(), robin(0.4, 0.7), neumann()}) {
    const auto basis = exp_modes(bc, 6, 1.3);
    const int first = basis.zero_mode ? 0 : 0;
    for (int pos = first; pos < basis.count() && pos < 4; ++pos) {
      const auto r = integrate(
          [&](double x) { return basis.profile(pos, x) * basis.profile(pos, x); },
          0.0, 1.3, 1e-12, 8);
      const double want =
          basis.is_zero(pos) ? 0.5 : 0.5 / basis.at(pos).omega;
      CHECK(r.value == doctest::Approx(want).epsilon(1e-10));
    }
    // distinct modes are orthogonal in the plain product
    const auto r01 = integrate(
        [&](double x) {
          return basis.profile(first, x) * basis.profile(first + 2, x);
        },
        0.0, 1.3, 1e-12, 8);
    CHECK(std::abs(r01.value) < 1e-10);
  }
}

TEST_CASE("the slice product reproduces the mode pairings") {
  const auto basis = exp_modes(robin(0.4, 0.7), 8, 1.3);
  const auto flat = flat_embedding(1.3, 0.35);
  const auto bent = bump_embedding(1.3, 0.08, 0.35);
  for (const auto* X : {&flat, &bent}) {
    for (int k = 0; k < 5; ++k) {
      for (int l = 0; l < 5; ++l) {
        const Complex pp =
            kg_pairing(basis, single(k, 8, +1), single(l, 8, +1), *X);
        const Complex pm =
            kg_pairing(basis, single(k, 8, +1), single(l, 8, -1), *X);
        const double want = (k == l) ? 1.0 : 0.0;
        CHECK(std::abs(pp - Complex(want, 0.0)) < 1e-8);
        CHECK(std::abs(pm) < 1e-8);
      }
      const Complex mm =
          kg_pairing(basis, single(k, 8, -1), single(k, 8, -1), *X);
      CHECK(std::abs(mm - Complex(-1.0, 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("the constant mode pairs like any other") {
  const auto basis = exp_modes(neumann(), 6, 1.0);
  const auto tilted = tilted_embedding(1.0, 0.25, End::Left, 0.1);
  CHECK(std::abs(kg_pairing(basis, single(0, 7, +1), single(0, 7, +1), tilted) -
                 Complex(1.0, 0.0)) < 1e-8);
  CHECK(std::abs(kg_pairing(basis, single(0, 7, +1), single(0, 7, -1), tilted)) <
        1e-8);
  CHECK(std::abs(kg_pairing(basis, single(0, 7, +1), single(3, 7, +1), tilted)) <
        1e-8);
}

TEST_CASE("pairings do not care which slice evaluates them") {
  const auto basis = exp_modes(robin(0.4, 0.7), 6, 1.3);
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModeSolution s1, s2;
  for (int p = 0; p < 6; ++p) {
    s1.pos.push_back({u(rng), u(rng)});
    s1.neg.push_back({u(rng), u(rng)});
    s2.pos.push_back({u(rng), u(rng)});
    s2.neg.push_back({u(rng), u(rng)});
  }
  const Complex on_flat = kg_pairing(basis, s1, s2, flat_embedding(1.3));
  const Complex on_bump = kg_pairing(basis, s1, s2, bump_embedding(1.3, 0.09));
  const Complex on_tilt =
      kg_pairing(basis, s1, s2, tilted_embedding(1.3, 0.3, End::Right));
  CHECK(std::abs(on_flat - on_bump) < 1e-6);
  CHECK(std::abs(on_flat - on_tilt) < 1e-6);
}

TEST_CASE("equal slices mix nothing") {
  const auto basis = exp_modes(dirichlet(), 6, 1.0);
  const auto X = bump_embedding(1.0, 0.07, 0.2);
  for (int l = 0; l < 4; ++l) {
    for (int m = 0; m < 4; ++m) {
      CHECK(std::abs(beta(X, X, basis, l, m)) < 1e-10);
      const auto tr = transport_coefficients(X, X, basis, l, m);
      const double want = (l == m) ? 1.0 : 0.0;
      CHECK(std::abs(tr.gamma - Complex(want, 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("two flat slices only rephase the oscillating modes") {
  const auto basis = exp_modes(robin(0.4, 0.7), 6, 1.3);
  const auto XI = flat_embedding(1.3, 0.0);
  const auto XF = flat_embedding(1.3, 0.9);
  for (int l = 0; l < 4; ++l) {
    for (int m = 0; m < 4; ++m) {
      CHECK(std::abs(beta(XI, XF, basis, l, m)) < 1e-8);
      const auto tr = transport_coefficients(XI, XF, basis, l, m);
      const Complex want =
          (l == m) ? std::exp(Complex(0.0, basis.at(l).omega * 0.9)) : 0.0;
      CHECK(std::abs(tr.gamma - want) < 1e-8);
    }
  }
}

TEST_CASE("time translation stirs the constant sector alone") {
  const auto basis = exp_modes(neumann(), 5, 1.0);
  const double dt = 0.7;
  const auto XI = flat_embedding(1.0, 0.0);
  const auto XF = flat_embedding(1.0, dt);
  const auto z = transport_coefficients(XI, XF, basis, 0, 0);
  CHECK(std::abs(z.beta - Complex(0.0, -dt / 2.0)) < 1e-8);
  CHECK(std::abs(z.gamma - Complex(1.0, dt / 2.0)) < 1e-8);
  // the pair obeys the one-sector normalization |gamma|^2 - |beta|^2 = 1
  CHECK(std::norm(z.gamma) - std::norm(z.beta) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(beta(XI, XF, basis, 0, 2)) < 1e-8);
  CHECK(std::abs(beta(XI, XF, basis, 2, 0)) < 1e-8);
}

TEST_CASE("the four-integral route matches the defining pairing") {
  const auto XI = flat_embedding(1.3, 0.0);
  const auto XF = tilted_embedding(1.3, 0.3, End::Left, 0.4);
  for (const auto& bc : {dirichlet(), robin(0.4, 0.7)}) {
    const auto basis = exp_modes(bc, 8, 1.3);
    for (const auto [l, m] : {std::pair{0, 0}, {1, 4}, {6, 2}, {3, 3}}) {
      const Complex fast = beta(XI, XF, basis, l, m);
      const Complex slow = transport_coefficients(XI, XF, basis, l, m).beta;
      CHECK(std::abs(fast - slow) < 1e-8);
    }
  }
}

TEST_CASE("the closed-form half of the integrals is exact") {
  const auto XI = bump_embedding(1.0, 0.06, 0.0);
  const auto XF = tilted_embedding(1.0, 0.2, End::Right, 0.3);
  const double wl = 4.0 * kPi, wm = 7.0 * kPi;
  // direct quadrature of the J integrand against the closed form
  auto f = [&](double s) {
    return Complex(0.0, 1.0) *
           (wl * (XI.t(s) + XI.x(s)) + wm * (XF.t(s) - XF.x(s)));
  };
  auto integrand = [&](double s) {
    const double br = wl * (XI.dt(s) + XI.dx(s)) + wm * (XF.dt(s) - XF.dx(s));
    return br * std::exp(f(s));
  };
  const auto direct = integrate_c(integrand, 0.0, 1.0, 1e-12, 64);
  const Complex closed =
      Complex(0.0, -1.0) * (std::exp(f(1.0)) - std::exp(f(0.0)));
  CHECK(std::abs(direct.value - closed) < 1e-10);
}

TEST_CASE("coefficients see the slice pair, not its parameter") {
  const auto XI = flat_embedding(1.0, 0.0);
  const auto XF = tilted_embedding(1.0, 0.25, End::Left, 0.3);
  // relabel both slices by the same monotone map; the identification of
  // points between them is untouched, so every coefficient must survive
  auto h = [](double s) { return s + 0.3 * std::sin(kPi * s) / kPi; };
  auto dh = [](double s) { return 1.0 + 0.3 * std::cos(kPi * s); };
  const auto XIr = reparametrize(XI, h, dh);
  const auto XFr = reparametrize(XF, h, dh);
  const auto basis = exp_modes(dirichlet(), 8, 1.0);
  for (const auto [l, m] : {std::pair{0, 1}, {4, 2}, {5, 5}}) {
    CHECK(std::abs(beta(XI, XF, basis, l, m) - beta(XIr, XFr, basis, l, m)) < 1e-8);
  }
}

TEST_CASE("transported data closes on the coefficient relations") {
  const int nin = 5, nout = 8;
  const auto basis = exp_modes(dirichlet(), nout, 1.0);
  const auto XI = flat_embedding(1.0, 0.0);
  const auto XF = tilted_embedding(1.0, 0.3, End::Left, 0.5);
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> ai;
  for (int n = 0; n < nin; ++n) ai.push_back({u(rng), u(rng)});

  // real solution with those labels, seen as Cauchy data on XI
  auto data_q = [&](double s) {
    Complex acc = 0.0;
    for (int n = 0; n < nin; ++n)
      acc += ai[n] * basis.sol(n, +1, XI.t(s), XI.x(s)) +
             std::conj(ai[n]) * basis.sol(n, -1, XI.t(s), XI.x(s));
    return acc;
  };
  auto data_p = [&](double s) {
    Complex acc = 0.0;
    for (int n = 0; n < nin; ++n) {
      acc += ai[n] * (XI.dx(s) * basis.sol_dt(n, +1, XI.t(s), XI.x(s)) +
                      XI.dt(s) * basis.sol_dx(n, +1, XI.t(s), XI.x(s)));
      acc += std::conj(ai[n]) *
             (XI.dx(s) * basis.sol_dt(n, -1, XI.t(s), XI.x(s)) +
              XI.dt(s) * basis.sol_dx(n, -1, XI.t(s), XI.x(s)));
    }
    return acc;
  };

  // the same data reread on XF and paired against the receiving basis
  for (int m = 0; m < nout; ++m) {
    auto against = [&](int eta) {
      return integrate_c(
                 [&](double s) {
                   const double t = XF.t(s), x = XF.x(s);
                   const Complex qm = basis.sol(m, eta, t, x);
                   const Complex pm = XF.dx(s) * basis.sol_dt(m, eta, t, x) +
                                      XF.dt(s) * basis.sol_dx(m, eta, t, x);
                   return Complex(0.0, 1.0) *
                          (std::conj(qm) * data_p(s) - data_q(s) * std::conj(pm));
                 },
                 0.0, 1.0, 1e-10, 128)
          .value;
    };
    const Complex af = against(+1);
    Complex predicted = 0.0;
    for (int n = 0; n < nin; ++n) {
      const auto tr = transport_coefficients(XI, XF, basis, n, m);
      predicted += tr.gamma * ai[n] + tr.beta * std::conj(ai[n]);
    }
    CHECK(std::abs(af - predicted) < 1e-6);
  }
}

TEST_CASE("kernel quantities carry their sign facts") {
  const auto basis = exp_modes(dirichlet(), 8, 1.0);
  const auto X = bump_embedding(1.0, 0.07, 0.0);
  const auto id = kernel_quantities(X, X, basis, 0.37, 2, 5);
  CHECK(id.b == doctest::Approx(0.0));
  CHECK(id.a == doctest::Approx(id.ni));
  CHECK(id.a == doctest::Approx(id.nf));

  const auto f1 = flat_embedding(1.0, 0.0), f2 = flat_embedding(1.0, 0.4);
  const auto fl = kernel_quantities(f1, f2, basis, 0.2, 1, 1);
  CHECK(fl.b == doctest::Approx(0.0));
  CHECK(fl.a == doctest::Approx(1.0));
  CHECK(fl.ftau == doctest::Approx(1.0));

  const auto tilted = tilted_embedding(1.0, 0.3, End::Left, 0.0);
  const auto tl = kernel_quantities(f1, tilted, basis, 0.0, 1, 1);
  CHECK(tl.b == doctest::Approx(-0.3));
  CHECK(kernel_quantities(f1, tilted, basis, 1.0, 1, 1).b ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a light-like stretch is refused") {
  Embedding bad;
  bad.ell = 1.0;
  bad.t = [](double s) { return 1.1 * s; };
  bad.x = [](double s) { return s; };
  bad.dt = [](double) { return 1.1; };
  bad.dx = [](double) { return 1.0; };
  CHECK_THROWS_AS(validate_embedding(bad), ValidationError);
  const auto basis = exp_modes(dirichlet(), 3, 1.0);
  CHECK_THROWS_AS(kernel_quantities(flat_embedding(1.0), bad, basis, 0.5, 0, 1),
                  ValidationError);
}

TEST_CASE("large mode pairs follow the boundary estimate") {
  const auto XI = flat_embedding(1.0, 0.0);
  const auto XF = tilted_embedding(1.0, 0.3, End::Left, 0.0);
  const auto basis = exp_modes(dirichlet(), 30, 1.0);
  for (const auto [l, m] : {std::pair{19, 21}, {24, 24}, {29, 25}}) {
    const Complex exact = beta(XI, XF, basis, l, m);
    const Complex estimate = beta_asymptotic(XI, XF, basis, l, m);
    CHECK(std::abs(exact - estimate) < 0.15 * std::abs(estimate));
  }
}

TEST_CASE("matching slopes settle, mismatched slopes leak") {
  const auto basis = exp_modes(dirichlet(), 40, 1.0);
  QuadControl q;
  q.tol = 1e-9;

  const auto flat = flat_embedding(1.0, 0.0);
  const auto same = unitarity_classification(flat, flat, basis, 40, 0, q);
  CHECK(same.unitary);
  CHECK(same.partial.back() < 1e-12);

  const auto bumped = bump_embedding(1.0, 0.01, 0.3);
  const auto gentle = unitarity_classification(flat, bumped, basis, 40, 0, q);
  CHECK(gentle.unitary);
  CHECK(gentle.increments_converged);

  const auto tilted = tilted_embedding(1.0, 0.3, End::Left, 0.0);
  const auto leaky = unitarity_classification(flat, tilted, basis, 40, 0, q);
  CHECK_FALSE(leaky.unitary);
  CHECK_FALSE(leaky.increments_converged);
  for (const double inc : leaky.increment) CHECK(inc > leaky.floor);
}
