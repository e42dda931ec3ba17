#include "mustring/dynamics.hpp"

#include <cmath>
#include <string>

#include "mustring/quadrature.hpp"

namespace mustring {

namespace {

// Light capture for the synthesized trig sums: per-mode frequency and the
// coefficient already divided by the normalization.
struct SumSpec {
  DerivedConstants d;
  std::vector<double> w;
  std::vector<double> c;

  double operator()(double x, int order) const {
    double s = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      s += c[i] * mode_profile(d, w[i], x, order);
    }
    return s;
  }
};

MuFunction sum_function(SumSpec spec, double scale) {
  for (double& ci : spec.c) {
    ci *= scale;
  }
  const DerivedConstants d = spec.d;
  MuFunction out;
  out.interior = [spec](double x) { return spec(x, 0); };
  out.d1 = [spec](double x) { return spec(x, 1); };
  out.d2 = [spec](double x) { return spec(x, 2); };
  double t0 = 0.0, tl = 0.0;
  for (size_t i = 0; i < spec.w.size(); ++i) {
    t0 += spec.c[i] * mode_profile(d, spec.w[i], 0.0);
    tl += spec.c[i] * mode_profile(d, spec.w[i], d.ell);
  }
  out.v0 = (1.0 - d.alpha0 * d.r0) * t0;
  out.vl = (1.0 - d.alphal * d.rl) * tl;
  out.tag = Smoothness::H2;
  return out;
}

void check_sizes(const ModeCoeffs& c, const ModeTable& table,
                 const char* who) {
  if (c.pos.size() != table.modes.size() ||
      c.vel.size() != table.modes.size()) {
    throw ValidationError(std::string(who) +
                          ": coefficient count does not match the mode table");
  }
}

double end_x(const DerivedConstants& d, End e) {
  return e == End::Left ? 0.0 : d.ell;
}

Residual make_residual(std::initializer_list<double> terms) {
  Residual r;
  for (double t : terms) {
    r.value += t;
    r.scale += std::abs(t);
  }
  return r;
}

}  // namespace

double temporal_frequency(const DerivedConstants& d, double omega) {
  return omega * std::sqrt(d.gamma / d.rho);
}

ModeCoeffs project(const CauchyData& data, const ModeTable& table,
                   double tol) {
  ModeCoeffs out;
  out.pos.reserve(table.modes.size());
  out.vel.reserve(table.modes.size());
  for (const Mode& m : table.modes) {
    const MuFunction hat = make_hat_mode(table.d, m);
    out.pos.push_back(modified_inner(hat, data.Q, table.d, tol));
    out.vel.push_back(modified_inner(hat, data.P, table.d, tol) / table.d.rho);
  }
  return out;
}

ModeCoeffs coeffs_at(const ModeCoeffs& c, const ModeTable& table, double t) {
  check_sizes(c, table, "coeffs_at");
  ModeCoeffs out = c;
  for (size_t i = 0; i < c.pos.size(); ++i) {
    const double om = temporal_frequency(table.d, table.modes[i].omega);
    const double co = std::cos(om * t), si = std::sin(om * t);
    out.pos[i] = c.pos[i] * co + c.vel[i] * si / om;
    out.vel[i] = -c.pos[i] * om * si + c.vel[i] * co;
  }
  return out;
}

CauchyData synthesize(const ModeCoeffs& c, const ModeTable& table) {
  check_sizes(c, table, "synthesize");
  SumSpec q, v;
  q.d = v.d = table.d;
  for (size_t i = 0; i < c.pos.size(); ++i) {
    q.w.push_back(table.modes[i].omega);
    v.w.push_back(table.modes[i].omega);
    q.c.push_back(c.pos[i] / table.modes[i].gm);
    v.c.push_back(c.vel[i] / table.modes[i].gm);
  }
  CauchyData out;
  out.Q = sum_function(q, 1.0);
  out.P = sum_function(v, table.d.rho);
  return out;
}

double field_deriv(const ModeCoeffs& c, const ModeTable& table, double t,
                   double x, int space_order, int time_order) {
  check_sizes(c, table, "field_deriv");
  if (time_order < 0 || time_order > 2) {
    throw ValidationError("field_deriv: time order must be 0, 1, or 2");
  }
  double s = 0.0;
  for (size_t i = 0; i < c.pos.size(); ++i) {
    const double om = temporal_frequency(table.d, table.modes[i].omega);
    const double co = std::cos(om * t), si = std::sin(om * t);
    const double pos_t = c.pos[i] * co + c.vel[i] * si / om;
    double factor = pos_t;
    if (time_order == 1) {
      factor = -c.pos[i] * om * si + c.vel[i] * co;
    } else if (time_order == 2) {
      factor = -om * om * pos_t;
    }
    s += factor * mode_profile(table.d, table.modes[i].omega, x, space_order) /
         table.modes[i].gm;
  }
  return s;
}

CauchyData evolve(const CauchyData& data, double t, const ModeTable& table,
                  double tol, double max_discard) {
  const ModeCoeffs c = project(data, table, tol);
  const double e_in = energy(data, table.d, tol);
  const double e_kept = energy_spectral(c, table);
  if (e_in > 1e-14) {
    const double discarded = std::max(0.0, e_in - e_kept);
    if (discarded > max_discard * e_in) {
      throw NumericalError(
          "evolve: mode cutoff discards an energy fraction of " +
          std::to_string(discarded / e_in));
    }
  }
  return synthesize(coeffs_at(c, table, t), table);
}

double energy(const CauchyData& data, const DerivedConstants& d, double tol) {
  const MuFunction dq = rn_derivative(data.Q, d);
  const double kinetic = inner_mu(data.P, data.P, d, tol) / (2.0 * d.rho);
  const double grad = inner_mu(dq, dq, d, tol);
  const double boundary =
      robin_weight(d, End::Left) * data.Q.v0 * data.Q.v0 +
      robin_weight(d, End::Right) * data.Q.vl * data.Q.vl;
  return kinetic + 0.5 * d.gamma * (grad + boundary);
}

double energy_spectral(const ModeCoeffs& c, const ModeTable& table) {
  check_sizes(c, table, "energy_spectral");
  double e = 0.0;
  for (size_t i = 0; i < c.pos.size(); ++i) {
    const double w = table.modes[i].omega;
    e += 0.5 * table.d.rho * c.vel[i] * c.vel[i] +
         0.5 * table.d.gamma * w * w * c.pos[i] * c.pos[i];
  }
  return e;
}

Residual boundary_ode_residual(const ModeCoeffs& c, const ModeTable& table,
                               End e, double t) {
  const double x = end_x(table.d, e);
  const double mj = e == End::Left ? table.params.m0 : table.params.ml;
  const double kj = e == End::Left ? table.params.k0 : table.params.kl;
  const double qdd = field_deriv(c, table, t, x, 0, 2);
  const double q = field_deriv(c, table, t, x, 0, 0);
  const double slope = field_deriv(c, table, t, x, 1, 0);
  return make_residual(
      {mj * qdd, kj * q, end_sign(e) * table.d.gamma * slope});
}

namespace {

// The stabilization functional applied to the 2k-th spatial derivative of a
// field trace family: gamma F''/rho + sign eps^2 gamma F'/m + eps k F/m.
// With a decoupled end the particle terms drop and only the wave part
// remains, which is exactly the iterate the pinned case calls for.
Residual chain_condition(const StringParams& p, const DerivedConstants& d,
                         End e, double f2k, double f2k1, double f2k2) {
  const double eps = e == End::Left ? p.eps0 : p.epsl;
  const double mj = e == End::Left ? p.m0 : p.ml;
  const double kj = e == End::Left ? p.k0 : p.kl;
  if (eps == 0.0) {
    return make_residual({d.gamma * f2k2 / d.rho});
  }
  if (mj <= 0.0) {
    throw ValidationError(
        "constraint_chain: a coupled end needs a positive mass");
  }
  return make_residual({d.gamma * f2k2 / d.rho,
                        end_sign(e) * eps * eps * d.gamma * f2k1 / mj,
                        eps * kj * f2k / mj});
}

EndChain chain_at_end(const StringParams& p, const DerivedConstants& d, End e,
                      int K, const std::optional<BoundaryDofs>& dofs,
                      const std::function<double(int, int)>& trace) {
  // trace(n, a): spatial order n, time order a, at this end
  const double eps = e == End::Left ? p.eps0 : p.epsl;
  const double mj = e == End::Left ? p.m0 : p.ml;
  const double q_field = trace(0, 0);
  const double v_field = trace(0, 1);
  const double slope = trace(1, 0);
  double qj, pj, lj;
  if (dofs) {
    qj = e == End::Left ? dofs->q0 : dofs->ql;
    pj = e == End::Left ? dofs->p0 : dofs->pl;
    lj = e == End::Left ? dofs->lambda0 : dofs->lambdal;
  } else {
    qj = eps == 0.0 ? 0.0 : q_field;
    pj = eps == 0.0 ? 0.0 : mj * v_field;
    lj = end_sign(e) * d.gamma * slope;
  }
  EndChain out;
  out.c1 = make_residual({lj, -end_sign(e) * d.gamma * slope});
  out.c2 = make_residual({q_field, -eps * qj});
  if (eps != 0.0 && mj <= 0.0) {
    throw ValidationError(
        "constraint_chain: a coupled end needs a positive mass");
  }
  out.c3 = eps == 0.0 ? make_residual({v_field})
                      : make_residual({v_field, -eps * pj / mj});
  for (int k = 0; k <= K; ++k) {
    out.on_q.push_back(chain_condition(p, d, e, trace(2 * k, 0),
                                       trace(2 * k + 1, 0),
                                       trace(2 * k + 2, 0)));
    out.on_p.push_back(chain_condition(p, d, e, trace(2 * k, 1),
                                       trace(2 * k + 1, 1),
                                       trace(2 * k + 2, 1)));
  }
  return out;
}

}  // namespace

ConstraintChain constraint_chain(const ModeCoeffs& c, const ModeTable& table,
                                 int K, double t,
                                 const std::optional<BoundaryDofs>& dofs) {
  check_sizes(c, table, "constraint_chain");
  if (K < 0) {
    throw ValidationError("constraint_chain: negative order");
  }
  ConstraintChain out;
  for (End e : {End::Left, End::Right}) {
    const double x = end_x(table.d, e);
    auto trace = [&](int n, int a) {
      return field_deriv(c, table, t, x, n, a);
    };
    (e == End::Left ? out.left : out.right) =
        chain_at_end(table.params, table.d, e, K, dofs, trace);
  }
  return out;
}

ConstraintChain constraint_chain(const CauchyData& data, int K,
                                 const StringParams& p,
                                 const DerivedConstants& d,
                                 const std::optional<BoundaryDofs>& dofs) {
  if (K < 0) {
    throw ValidationError("constraint_chain: negative order");
  }
  if (K > 0) {
    throw ValidationError(
        "constraint_chain: raw data supports order 0 only; deeper iterates "
        "need derivatives a plain function cannot promise");
  }
  ConstraintChain out;
  for (End e : {End::Left, End::Right}) {
    const double x = end_x(d, e);
    auto trace = [&](int n, int a) {
      const MuFunction& f = a == 0 ? data.Q : data.P;
      const double scale = a == 0 ? 1.0 : 1.0 / d.rho;
      switch (n) {
        case 0:
          return scale * f.trace(e, d.ell);
        case 1:
          return scale * deriv1(f, x, d.ell);
        default:
          return scale * deriv2(f, x, d.ell);
      }
    };
    (e == End::Left ? out.left : out.right) =
        chain_at_end(p, d, e, K, dofs, trace);
  }
  return out;
}

TwoMassState two_mass_limit(const StringParams& p, const TwoMassState& ic,
                            double t) {
  validate(p);
  if (p.rho != 0.0 || p.k0 != 0.0 || p.kl != 0.0 || p.m0 <= 0.0 ||
      p.ml <= 0.0 || p.eps0 != 1.0 || p.epsl != 1.0) {
    throw ValidationError(
        "two_mass_limit: needs a massless string, no springs, and two "
        "coupled endpoint masses");
  }
  const double total = p.m0 + p.ml;
  const double mu_red = p.m0 * p.ml / total;
  const double om = std::sqrt(p.gamma / (p.ell * mu_red));
  const double c0 = (p.m0 * ic.q0 + p.ml * ic.ql) / total;
  const double cdot = (p.m0 * ic.v0 + p.ml * ic.vl) / total;
  const double d0 = ic.ql - ic.q0;
  const double ddot0 = ic.vl - ic.v0;
  const double dt = d0 * std::cos(om * t) + ddot0 * std::sin(om * t) / om;
  const double ddt = -d0 * om * std::sin(om * t) + ddot0 * std::cos(om * t);
  const double ct = c0 + cdot * t;
  TwoMassState out;
  out.q0 = ct - p.ml * dt / total;
  out.v0 = cdot - p.ml * ddt / total;
  out.ql = ct + p.m0 * dt / total;
  out.vl = cdot + p.m0 * ddt / total;
  return out;
}

CauchyData gaussian_data(const DerivedConstants& d, double center_frac,
                         double width_frac) {
  const double c = center_frac * d.ell;
  const double w = width_frac * d.ell;
  auto f = [c, w](double x) {
    const double u = (x - c) / w;
    return std::exp(-u * u);
  };
  auto f1 = [c, w, f](double x) {
    const double u = (x - c) / w;
    return -2.0 * u / w * f(x);
  };
  auto f2 = [c, w, f](double x) {
    const double u = (x - c) / w;
    return (4.0 * u * u - 2.0) / (w * w) * f(x);
  };
  CauchyData out;
  out.Q.interior = f;
  out.Q.d1 = f1;
  out.Q.d2 = f2;
  out.Q.v0 = (1.0 - d.alpha0 * d.r0) * f(0.0);
  out.Q.vl = (1.0 - d.alphal * d.rl) * f(d.ell);
  out.Q.tag = Smoothness::H2;
  out.P = make_smooth([](double) { return 0.0; }, d.ell,
                      [](double) { return 0.0; }, [](double) { return 0.0; });
  out.P.v0 = out.P.vl = 0.0;
  return out;
}

ModeCoeffs single_mode_coeffs(const ModeTable& table, int index,
                              double amplitude) {
  if (index < 0 || static_cast<size_t>(index) >= table.modes.size()) {
    throw ValidationError("single_mode_coeffs: index outside the table");
  }
  ModeCoeffs c;
  c.pos.assign(table.modes.size(), 0.0);
  c.vel.assign(table.modes.size(), 0.0);
  c.pos[index] = amplitude;
  return c;
}

ModeCoeffs two_mode_coeffs(const ModeTable& table, int i, double ai, int j,
                           double aj) {
  ModeCoeffs c = single_mode_coeffs(table, i, ai);
  if (j < 0 || static_cast<size_t>(j) >= table.modes.size()) {
    throw ValidationError("two_mode_coeffs: index outside the table");
  }
  c.pos[j] += aj;
  return c;
}

}  // namespace mustring
