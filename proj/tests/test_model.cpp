#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mustring/model.hpp"

using namespace mustring;

TEST_CASE("defaults pass validation") {
  StringParams p;
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("validation rejects bad fields one by one") {
  StringParams p;
  p.gamma = 0.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = StringParams{};
  p.ell = -1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = StringParams{};
  p.m0 = -0.5;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = StringParams{};
  p.kl = -2.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = StringParams{};
  p.eps0 = 0.5;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = StringParams{};
  p.rho = std::nan("");
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("rho = 0 is valid data but blocked from the mode pipeline") {
  StringParams p;
  p.rho = 0.0;
  CHECK_NOTHROW(validate(p));
  CHECK_THROWS_AS(require_spectral(p), ValidationError);
  CHECK_THROWS_AS(reduce(p), ValidationError);
}

TEST_CASE("spectral requirements") {
  StringParams p;
  CHECK_NOTHROW(require_spectral(p));
  p.k0 = 0.0;
  p.kl = 0.0;
  CHECK_THROWS_AS(require_spectral(p), ValidationError);
  p = StringParams{};
  p.eps0 = 0.0;
  CHECK_THROWS_AS(require_spectral(p), ValidationError);
}

TEST_CASE("alpha degenerate branches") {
  CHECK(solve_alpha(0.0, 0.7) == 0.0);
  CHECK(solve_alpha(0.25, 0.0) == 0.25);
  CHECK(solve_alpha(0.0, 0.0) == 0.0);
}

TEST_CASE("alpha solve hits the residual target and the right branch") {
  const double mu = 0.5, r = 0.2;
  const double a = solve_alpha(mu, r);
  CHECK(a > 0.0);
  CHECK(a < 1.0 / (3.0 * r));
  const double s = 1.0 - a * r;
  CHECK(std::abs(a * s * s - mu) < 1e-12 * (1.0 + mu));
  // squaring the defining relation gives a (1 - a r) = sqrt(a mu)
  CHECK(std::abs(a * s - std::sqrt(a * mu)) < 1e-12);
}

TEST_CASE("alpha does not exist past the branch ceiling") {
  CHECK_THROWS_AS(solve_alpha(1.0, 1.0), NumericalError);
  // right at the ceiling the cubic has a double root at 1/(3r); the
  // solver promises residual accuracy, which pins alpha only to sqrt(tol)
  const double r = 0.3;
  const double mu = 4.0 / (27.0 * r);
  const double a = solve_alpha(mu, r);
  const double s = 1.0 - a * r;
  CHECK(std::abs(a * s * s - mu) < 1e-12 * (1.0 + mu));
  CHECK(a == doctest::Approx(1.0 / (3.0 * r)).epsilon(1e-5));
  CHECK(a <= 1.0 / (3.0 * r) + 1e-12);
}

TEST_CASE("derive_constants wires the reductions together") {
  StringParams p;
  p.rho = 2.0;
  p.gamma = 4.0;
  p.m0 = 1.0;
  p.ml = 0.5;
  p.k0 = 0.8;
  p.kl = 0.0;
  const DerivedConstants d = derive_constants(p);
  CHECK(d.mu0 == doctest::Approx(0.5));
  CHECK(d.mul == doctest::Approx(0.25));
  CHECK(d.r0 == doctest::Approx(0.2));
  CHECK(d.rl == 0.0);
  CHECK(d.has_measure);
  // no spring at the right end means alpha = mu there
  CHECK(d.alphal == doctest::Approx(0.25));
  CHECK(d.cl == 0.0);
  const double s0 = 1.0 - d.alpha0 * d.r0;
  CHECK(d.c0 == doctest::Approx(d.alpha0 * d.r0 / s0));
  CHECK(1.0 + d.c0 == doctest::Approx(1.0 / s0));
}

TEST_CASE("the all-ones set sits outside the alpha branch") {
  StringParams p;  // defaults are all ones
  CHECK_THROWS_AS(derive_constants(p), NumericalError);
  CHECK_NOTHROW(reduce(p));
}

TEST_CASE("end helpers") {
  CHECK(end_sign(End::Left) == -1.0);
  CHECK(end_sign(End::Right) == 1.0);
  DerivedConstants d;
  d.mu0 = 1.0;
  d.mul = 2.0;
  CHECK(d.mu(End::Left) == 1.0);
  CHECK(d.mu(End::Right) == 2.0);
}
