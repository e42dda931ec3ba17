#include "mustring/param_mech.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mustring {

Potential free_potential() {
  Potential w;
  w.w = [](double) { return 0.0; };
  w.dw = [](double) { return 0.0; };
  return w;
}

Potential harmonic_potential(double k) {
  Potential w;
  w.w = [k](double q) { return 0.5 * k * q * q; };
  w.dw = [k](double q) { return k * q; };
  return w;
}

Potential quartic_potential(double lambda) {
  Potential w;
  w.w = [lambda](double q) { return 0.25 * lambda * q * q * q * q; };
  w.dw = [lambda](double q) { return lambda * q * q * q; };
  return w;
}

Lapse unit_lapse() { return constant_lapse(1.0); }

Lapse constant_lapse(double c) {
  Lapse n;
  n.value = [c](double, const PMState&) { return c; };
  n.sign_definite = c != 0.0;
  return n;
}

Lapse wavy_lapse(double a) {
  Lapse n;
  n.value = [a](double s, const PMState&) { return 1.0 + a * std::sin(s); };
  n.sign_definite = std::abs(a) < 1.0;
  return n;
}

PMTangent hamiltonian_field(const PMState& st, double s, const Lapse& n,
                            double mass, const Potential& w) {
  if (!(mass > 0.0)) throw ValidationError("hamiltonian_field needs a positive mass");
  if (!n.value || !w.dw)
    throw ValidationError("hamiltonian_field needs lapse and potential rules");
  const double nv = n.value(s, st);
  PMTangent y;
  y.yt = nv;
  y.yq = st.p / mass * nv;
  y.yp = -w.dw(st.q) * nv;
  return y;
}

Trajectory integrate_orbit(const PMState& start, const Lapse& n, double mass,
                           const Potential& w, double s0, double s1, int steps) {
  if (steps < 1) throw ValidationError("integrate_orbit needs steps >= 1");
  if (!(s1 > s0)) throw ValidationError("integrate_orbit needs s1 > s0");
  const double h = (s1 - s0) / steps;

  auto deriv = [&](double s, const PMState& st) {
    return hamiltonian_field(st, s, n, mass, w);
  };
  auto nudge = [](const PMState& st, const PMTangent& y, double f) {
    return PMState{st.q + f * y.yq, st.t + f * y.yt, st.p + f * y.yp};
  };

  Trajectory out;
  out.reserve(steps + 1);
  PMState st = start;
  out.push_back({s0, st});
  for (int i = 0; i < steps; ++i) {
    const double s = s0 + i * h;
    const PMTangent k1 = deriv(s, st);
    const PMTangent k2 = deriv(s + 0.5 * h, nudge(st, k1, 0.5 * h));
    const PMTangent k3 = deriv(s + 0.5 * h, nudge(st, k2, 0.5 * h));
    const PMTangent k4 = deriv(s + h, nudge(st, k3, h));
    st.q += h / 6.0 * (k1.yq + 2.0 * k2.yq + 2.0 * k3.yq + k4.yq);
    st.t += h / 6.0 * (k1.yt + 2.0 * k2.yt + 2.0 * k3.yt + k4.yt);
    st.p += h / 6.0 * (k1.yp + 2.0 * k2.yp + 2.0 * k3.yp + k4.yp);
    if (!std::isfinite(st.q) || !std::isfinite(st.t) || !std::isfinite(st.p))
      throw NumericalError("orbit left the finite range at s = " +
                           std::to_string(s + h));
    out.push_back({s0 + (i + 1) * h, st});
  }
  return out;
}

namespace {

// Cubic fit through four consecutive samples, evaluated at s.
double fit4(const Trajectory& orbit, int j, double s,
            double (*pick)(const OrbitPoint&)) {
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = pick(orbit[j + a]);
    for (int b = 0; b < 4; ++b)
      if (b != a)
        w *= (s - orbit[j + b].s) / (orbit[j + a].s - orbit[j + b].s);
    out += w;
  }
  return out;
}

}  // namespace

std::pair<double, double> gauge_fix(const Trajectory& orbit, double tau) {
  const int n = static_cast<int>(orbit.size());
  if (n < 2) throw ValidationError("gauge_fix needs a sampled orbit");

  int hit = -1;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = orbit[i].state.t - tau;
    const double b = orbit[i + 1].state.t - tau;
    if (a == 0.0) return {orbit[i].state.q, orbit[i].state.p};
    if ((a < 0.0) != (b < 0.0) || b == 0.0) {
      hit = i;
      break;
    }
  }
  if (hit < 0)
    throw ValidationError("the clock never crosses tau = " + std::to_string(tau) +
                          " on the sampled orbit");
  if (n < 4) {
    // too short for the cubic; fall back to the secant on the bracket
    const OrbitPoint& a = orbit[hit];
    const OrbitPoint& b = orbit[hit + 1];
    const double f = (tau - a.state.t) / (b.state.t - a.state.t);
    return {a.state.q + f * (b.state.q - a.state.q),
            a.state.p + f * (b.state.p - a.state.p)};
  }

  const int j = std::min(std::max(hit - 1, 0), n - 4);
  auto t_of = [&](double s) {
    return fit4(orbit, j, s, [](const OrbitPoint& o) { return o.state.t; });
  };
  double lo = orbit[hit].s, hi = orbit[hit + 1].s;
  double flo = t_of(lo) - tau;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = t_of(mid) - tau;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  return {fit4(orbit, j, s, [](const OrbitPoint& o) { return o.state.q; }),
          fit4(orbit, j, s, [](const OrbitPoint& o) { return o.state.p; })};
}

double observable(double q_tau, double p_tau, ObservableKind kind, double mass,
                  const Potential& w) {
  if (kind == ObservableKind::Projection) return q_tau;
  if (!(mass > 0.0)) throw ValidationError("energy observable needs a positive mass");
  return p_tau * p_tau / (2.0 * mass) + w.w(q_tau);
}

double parametrized_energy(double q, double v, double tau, double mass,
                           const Potential& w) {
  if (!(tau > 0.0))
    throw ValidationError("parametrized energy needs a positive clock velocity");
  const double p = mass * v / tau;
  const double pi = -(mass * v * v / (2.0 * tau * tau) + w.w(q));
  const double lag = mass * v * v / (2.0 * tau) - tau * w.w(q);
  return p * v + pi * tau - lag;
}

double lifted_pi_component(const PMState& st, const PMTangent& y, double mass,
                           const Potential& w) {
  return -st.p / mass * y.yp - w.dw(st.q) * y.yq;
}

}  // namespace mustring
