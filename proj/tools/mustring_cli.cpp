// mustring: command line front end over the core library.
//
// Subcommands:
//   modes        frequency ladder with norms, endpoint weights, residuals
//   evolve       time series of a string state (energy, ends, probes)
//   fock         factorization diagnostic or boundary leak rate
//   bogoliubov   slice-change classification and |beta| matrix
//   pmech        parametrized particle orbit and gauge-fixed observables
//   verify       the acceptance battery, one line per criterion
//
// Every run stamps a manifest (resolved parameters, cutoffs, tolerances,
// seed where used) and copies it verbatim into the header of whatever the
// run writes, so a result file names the run that produced it. Reruns with
// the same manifest reproduce the output byte for byte.
//
// Exit codes: 0 on success, 1 for rejected input, 2 when a numerical
// procedure gives up. With --json-errors the failure also lands on stderr
// as a single JSON object.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mustring/acceptance.hpp"
#include "mustring/bogoliubov.hpp"
#include "mustring/dynamics.hpp"
#include "mustring/fock.hpp"
#include "mustring/io.hpp"
#include "mustring/model.hpp"
#include "mustring/param_mech.hpp"
#include "mustring/spectrum.hpp"

namespace {

using namespace mustring;

// name[:a,b,...] -> name plus the raw argument tokens.
struct Preset {
  std::string name;
  std::vector<std::string> args;
};

Preset split_preset(const std::string& text) {
  Preset out;
  const auto colon = text.find(':');
  out.name = text.substr(0, colon);
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (true) {
      const auto comma = rest.find(',', start);
      out.args.push_back(rest.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

double preset_num(const Preset& p, std::size_t idx, double fallback) {
  if (idx >= p.args.size()) return fallback;
  const std::string& s = p.args[idx];
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ValidationError("preset argument '" + s + "' is not a number");
  return v;
}

long preset_int(const Preset& p, std::size_t idx, long fallback) {
  if (idx >= p.args.size()) return fallback;
  const std::string& s = p.args[idx];
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw ValidationError("preset argument '" + s + "' is not an integer");
  return v;
}

void reject_extra_args(const Preset& p, std::size_t allowed) {
  if (p.args.size() > allowed)
    throw ValidationError("preset '" + p.name + "' takes at most " +
                          std::to_string(allowed) + " argument(s)");
}

StringParams params_from(const std::string& config_path) {
  if (config_path.empty()) return StringParams{};
  return load_config(config_path);
}

// A ladder of at least nmodes roots. One retry with a wider scan covers the
// interval that occasionally holds no root below the requested edge.
ModeTable table_with(const StringParams& p, int nmodes) {
  ModeTable t = find_modes(p, nmodes + 2);
  if (t.count() < nmodes) t = find_modes(p, nmodes + 8);
  if (t.count() < nmodes)
    throw NumericalError("frequency scan found " + std::to_string(t.count()) +
                         " modes, needed " + std::to_string(nmodes));
  return t;
}

void write_artifact(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file: " + out_path);
  f << text;
  f.flush();
  if (!f) throw ValidationError("failed while writing: " + out_path);
}

std::string out_label(const std::string& out_path) {
  return out_path.empty() ? "(stdout)" : out_path;
}

// ---------------------------------------------------------------- modes --

void run_modes(const std::string& config, int count, const std::string& out) {
  const StringParams p = params_from(config);
  const ModeTable table = table_with(p, count);

  RunManifest man("modes");
  man.fields.raw("params", params_json(p));
  man.fields.integer("count", count);
  man.fields.boolean("has_measure", table.d.has_measure);
  man.fields.text("out", out_label(out));

  std::ostringstream os;
  os << "# manifest: " << man.json() << "\n";
  csv_row(os, {"m", "omega", "gm", "Xhat(0)", "Xhat(ell)", "residual"});
  for (int i = 0; i < count; ++i) {
    const Mode& md = table.modes[static_cast<std::size_t>(i)];
    const std::string h0 =
        table.d.has_measure ? g17(mode_hat_end(table.d, md, End::Left)) : "nan";
    const std::string hl =
        table.d.has_measure ? g17(mode_hat_end(table.d, md, End::Right)) : "nan";
    csv_row(os, {std::to_string(i + 1), g17(md.omega), g17(md.gm), h0, hl,
                 g17(freq_eq(table.d, md.omega))});
  }
  write_artifact(out, os.str());
}

// --------------------------------------------------------------- evolve --

void run_evolve(const std::string& config, const std::string& preset_text,
                int cutoff, int count, double tol, const std::string& out) {
  const StringParams p = params_from(config);
  const ModeTable table = table_with(p, cutoff);
  const double ell = table.d.ell;

  const Preset preset = split_preset(preset_text);
  ModeCoeffs c;
  if (preset.name == "gaussian") {
    reject_extra_args(preset, 0);
    if (!table.d.has_measure)
      throw ValidationError(
          "the gaussian preset projects against the measure-space modes, "
          "which need mu <= 4/(27 r) at both ends; use mode:M or twomode:I,J "
          "here, or lighten the end masses");
    c = project(gaussian_data(table.d), table, tol);
  } else if (preset.name == "mode") {
    reject_extra_args(preset, 1);
    const long m = preset_int(preset, 0, 1);
    if (m < 1 || m > table.count())
      throw ValidationError("mode preset index out of range 1.." +
                            std::to_string(table.count()));
    c = single_mode_coeffs(table, static_cast<int>(m - 1), 1.0);
  } else if (preset.name == "twomode") {
    reject_extra_args(preset, 2);
    const long i = preset_int(preset, 0, 1);
    const long j = preset_int(preset, 1, 2);
    if (i < 1 || i > table.count() || j < 1 || j > table.count())
      throw ValidationError("twomode preset index out of range 1.." +
                            std::to_string(table.count()));
    if (i == j) throw ValidationError("twomode preset needs two distinct modes");
    c = two_mode_coeffs(table, static_cast<int>(i - 1), 1.0,
                        static_cast<int>(j - 1), 0.5);
  } else {
    throw ValidationError("unknown evolve preset '" + preset.name +
                          "' (gaussian, mode:M, twomode:I,J)");
  }

  // The energy column uses the measure-calculus route when the boundary
  // weights exist; rebuilding the state and integrating it is the check
  // that is independent of the coefficients. Outside the weight branch the
  // spectral form is the only route.
  const bool measure_route = table.d.has_measure;
  const double horizon = 10.0;

  RunManifest man("evolve");
  man.fields.raw("params", params_json(p));
  man.fields.text("preset", preset_text);
  man.fields.integer("cutoff", cutoff);
  man.fields.integer("count", count);
  man.fields.num("tol", tol);
  man.fields.num("horizon", horizon);
  man.fields.text("energy_route", measure_route ? "measure" : "spectral");
  man.fields.num("probe_x1", ell / 3.0);
  man.fields.num("probe_x2", 2.0 * ell / 3.0);
  man.fields.text("out", out_label(out));

  std::ostringstream os;
  os << "# manifest: " << man.json() << "\n";
  csv_row(os, {"t", "energy", "end0", "endl", "probe_third",
               "probe_two_thirds"});
  for (int i = 0; i < count; ++i) {
    const double t = horizon * i / (count - 1);
    double e;
    if (measure_route) {
      e = energy(synthesize(coeffs_at(c, table, t), table), table.d, tol);
    } else {
      e = energy_spectral(coeffs_at(c, table, t), table);
    }
    csv_row(os, {g17(t), g17(e), g17(field_deriv(c, table, t, 0.0)),
                 g17(field_deriv(c, table, t, ell)),
                 g17(field_deriv(c, table, t, ell / 3.0)),
                 g17(field_deriv(c, table, t, 2.0 * ell / 3.0))});
  }
  write_artifact(out, os.str());
}

// ----------------------------------------------------------------- fock --

void run_fock(const std::string& config, const std::string& preset_text,
              int count, int cutoff, const std::string& out) {
  const StringParams p = params_from(config);
  const Preset preset = split_preset(preset_text);

  if (preset.name == "factorization") {
    reject_extra_args(preset, 0);
    const ModeTable table = table_with(p, count);
    const FactorReport rep = factorization_diagnostic(table, count);

    RunManifest man("fock");
    man.fields.raw("params", params_json(p));
    man.fields.text("preset", preset_text);
    man.fields.integer("count", count);
    man.fields.num("lead", rep.lead);
    man.fields.text("out", out_label(out));

    std::ostringstream os;
    os << "# manifest: " << man.json() << "\n";
    csv_row(os, {"n", "coeff", "n_coeff2", "partial"});
    for (int n = 1; n <= count; ++n) {
      const double cn = rep.coeff[static_cast<std::size_t>(n - 1)];
      csv_row(os, {std::to_string(n), g17(cn), g17(n * cn * cn),
                   g17(rep.partial[static_cast<std::size_t>(n - 1)])});
    }
    write_artifact(out, os.str());
    return;
  }

  if (preset.name == "rate") {
    reject_extra_args(preset, 2);
    const ModeTable table = table_with(p, cutoff);
    const long i = preset_int(preset, 0, 1);
    const long j = preset_int(preset, 1, 2);
    if (i < 1 || i > table.count() || j < 1 || j > table.count())
      throw ValidationError("rate preset index out of range 1.." +
                            std::to_string(table.count()));
    OneParticleVector v0;
    v0.c.assign(static_cast<std::size_t>(table.count()), Complex(0.0, 0.0));
    v0.c[static_cast<std::size_t>(i - 1)] += Complex(1.0, 0.0);
    v0.c[static_cast<std::size_t>(j - 1)] += Complex(1.0, 0.0);

    const double horizon = 2.0;
    RunManifest man("fock");
    man.fields.raw("params", params_json(p));
    man.fields.text("preset", preset_text);
    man.fields.integer("cutoff", cutoff);
    man.fields.integer("count", count);
    man.fields.num("horizon", horizon);
    man.fields.text("out", out_label(out));

    std::ostringstream os;
    os << "# manifest: " << man.json() << "\n";
    csv_row(os, {"t", "re_omega0", "im_omega0", "trace_abs2", "rate"});
    for (int s = 0; s < count; ++s) {
      const double t = horizon * s / (count - 1);
      const NonUnitarityReport rep = trace_nonunitarity_rate(v0, t, table);
      csv_row(os, {g17(t), g17(rep.omega0.real()), g17(rep.omega0.imag()),
                   g17(rep.trace_abs2), g17(rep.rate)});
    }
    write_artifact(out, os.str());
    return;
  }

  throw ValidationError("unknown fock preset '" + preset.name +
                        "' (factorization, rate:I,J)");
}

// ----------------------------------------------------------- bogoliubov --

void run_bogoliubov(const std::string& config, const std::string& preset_text,
                    int nmax, double tol, const std::string& out) {
  BoundaryCondition bc;
  double ell = 1.0;
  StringParams p;
  const bool have_config = !config.empty();
  if (have_config) {
    p = load_config(config);
    // The mode basis here is the massless-end family; endpoint inertia or a
    // switched-off coupling would change the frequency equation itself.
    if (p.m0 != 0.0 || p.ml != 0.0)
      throw ValidationError(
          "the slice-change basis needs massless ends: set m0 = 0 and ml = 0");
    if (p.eps0 != 1.0 || p.epsl != 1.0)
      throw ValidationError(
          "the slice-change basis needs both end couplings on (eps = 1)");
    if (p.rho != p.gamma)
      throw ValidationError(
          "the slice-change analysis runs at unit wave speed: set rho = gamma");
    bc.kind = BcKind::Robin;
    bc.r0 = p.k0 / p.gamma;
    bc.rl = p.kl / p.gamma;
    ell = p.ell;
  }

  const Preset preset = split_preset(preset_text);
  Embedding xf;
  if (preset.name == "flat") {
    reject_extra_args(preset, 1);
    xf = flat_embedding(ell, preset_num(preset, 0, 0.4));
  } else if (preset.name == "tilted") {
    reject_extra_args(preset, 1);
    xf = tilted_embedding(ell, preset_num(preset, 0, 0.3), End::Right);
  } else if (preset.name == "bump") {
    reject_extra_args(preset, 1);
    xf = bump_embedding(ell, preset_num(preset, 0, 0.02));
  } else {
    throw ValidationError("unknown bogoliubov preset '" + preset.name +
                          "' (flat:T0, tilted:S, bump:H)");
  }
  const Embedding xi = flat_embedding(ell, 0.0);

  const ExpModeBasis basis = exp_modes(bc, nmax, ell);
  QuadControl qc;
  qc.tol = tol;
  const UnitarityReport rep =
      unitarity_classification(xi, xf, basis, nmax, 0, qc);

  RunManifest man("bogoliubov");
  if (have_config) man.fields.raw("params", params_json(p));
  man.fields.text("basis", have_config ? "robin" : "dirichlet");
  man.fields.num("r0", bc.r0);
  man.fields.num("rl", bc.rl);
  man.fields.num("ell", ell);
  man.fields.text("preset", preset_text);
  man.fields.integer("nmax", nmax);
  man.fields.num("tol", tol);
  man.fields.text("out", out_label(out));

  JsonRecord top;
  top.integer("schema_version", 1);
  top.raw("manifest", man.json());
  top.boolean("unitary", rep.unitary);
  top.num("slope_initial_0", rep.slope_i0);
  top.num("slope_initial_ell", rep.slope_il);
  top.num("slope_final_0", rep.slope_f0);
  top.num("slope_final_ell", rep.slope_fl);
  top.raw("sizes", json_array(rep.sizes));
  top.raw("partial_sums", json_array(rep.partial));
  top.raw("increments", json_array(rep.increment));
  top.num("floor", rep.floor);
  top.boolean("increments_converged", rep.increments_converged);
  if (!out.empty()) top.text("beta_matrix", out + ".beta.csv");
  write_artifact(out, top.render() + "\n");

  // The |beta| matrix goes to a sibling file; it is bulky and only wanted
  // when the run is being kept.
  if (!out.empty()) {
    const int top_size = rep.sizes.back();
    std::ostringstream os;
    os << "# manifest: " << man.json() << "\n";
    csv_row(os, {"l", "m", "abs_beta"});
    for (int l = 0; l < top_size; ++l)
      for (int m = 0; m < top_size; ++m)
        csv_row(os, {std::to_string(l), std::to_string(m),
                     g17(rep.abs_beta[static_cast<std::size_t>(l) * top_size +
                                      m])});
    write_artifact(out + ".beta.csv", os.str());
  }
}

// ---------------------------------------------------------------- pmech --

void run_pmech(const std::string& preset_text, int steps, int count,
               const std::string& out) {
  // preset is POT[,LAPSE], each part NAME[:VALUE].
  const auto comma = preset_text.find(',');
  const Preset pot_part = split_preset(preset_text.substr(0, comma));
  const Preset lapse_part = split_preset(
      comma == std::string::npos ? std::string("unit")
                                 : preset_text.substr(comma + 1));

  Potential w;
  std::string pot_desc;
  if (pot_part.name == "free") {
    reject_extra_args(pot_part, 0);
    w = free_potential();
    pot_desc = "free";
  } else if (pot_part.name == "harmonic") {
    reject_extra_args(pot_part, 1);
    const double k = preset_num(pot_part, 0, 1.0);
    if (!(k > 0.0)) throw ValidationError("harmonic preset needs k > 0");
    w = harmonic_potential(k);
    pot_desc = "harmonic(k=" + g17(k) + ")";
  } else if (pot_part.name == "quartic") {
    reject_extra_args(pot_part, 1);
    const double lam = preset_num(pot_part, 0, 1.0);
    if (!(lam > 0.0)) throw ValidationError("quartic preset needs lambda > 0");
    w = quartic_potential(lam);
    pot_desc = "quartic(lambda=" + g17(lam) + ")";
  } else {
    throw ValidationError("unknown potential preset '" + pot_part.name +
                          "' (free, harmonic:K, quartic:L)");
  }

  Lapse n;
  std::string lapse_desc;
  if (lapse_part.name == "unit") {
    reject_extra_args(lapse_part, 0);
    n = unit_lapse();
    lapse_desc = "unit";
  } else if (lapse_part.name == "constant") {
    reject_extra_args(lapse_part, 1);
    const double cval = preset_num(lapse_part, 0, 1.0);
    if (!(cval > 0.0))
      throw ValidationError(
          "a nonpositive constant lapse freezes or reverses the clock");
    n = constant_lapse(cval);
    lapse_desc = "constant(c=" + g17(cval) + ")";
  } else if (lapse_part.name == "wavy") {
    reject_extra_args(lapse_part, 1);
    const double a = preset_num(lapse_part, 0, 0.5);
    if (!(std::abs(a) < 1.0))
      throw ValidationError("wavy lapse amplitude must stay inside (-1, 1)");
    n = wavy_lapse(a);
    lapse_desc = "wavy(a=" + g17(a) + ")";
  } else {
    throw ValidationError("unknown lapse preset '" + lapse_part.name +
                          "' (unit, constant:C, wavy:A)");
  }

  if (count > steps + 1)
    throw ValidationError("count exceeds the sampled points (steps + 1)");

  const double mass = 1.0;
  const PMState start{1.0, 0.0, 0.5};
  const double s1 = 10.0;
  const Trajectory orbit = integrate_orbit(start, n, mass, w, 0.0, s1, steps);

  RunManifest man("pmech");
  man.fields.text("potential", pot_desc);
  man.fields.text("lapse", lapse_desc);
  man.fields.num("mass", mass);
  man.fields.num("q0", start.q);
  man.fields.num("t0", start.t);
  man.fields.num("p0", start.p);
  man.fields.num("s_end", s1);
  man.fields.integer("steps", steps);
  man.fields.integer("count", count);
  man.fields.text("out", out_label(out));

  // Gauge-fixed observables at nine clock values spread over the orbit.
  const double t_final = orbit.back().state.t;
  std::vector<double> taus, energies;
  std::string obs = "[";
  for (int k = 1; k <= 9; ++k) {
    const double tau = 0.1 * k * t_final;
    const auto [q_tau, p_tau] = gauge_fix(orbit, tau);
    const double e = observable(q_tau, p_tau, ObservableKind::Energy, mass, w);
    taus.push_back(tau);
    energies.push_back(e);
    JsonRecord rec;
    rec.num("tau", tau);
    rec.num("q", q_tau);
    rec.num("p", p_tau);
    rec.num("energy", e);
    if (k > 1) obs += ',';
    obs += rec.render();
  }
  obs += ']';
  const auto [emin, emax] = std::minmax_element(energies.begin(),
                                               energies.end());

  JsonRecord top;
  top.integer("schema_version", 1);
  top.raw("manifest", man.json());
  top.num("t_final", t_final);
  top.raw("observables", obs);
  top.num("energy_spread", *emax - *emin);

  std::ostringstream os;
  os << "# manifest: " << man.json() << "\n";
  csv_row(os, {"s", "q", "t", "p"});
  for (int i = 0; i < count; ++i) {
    const std::size_t idx = static_cast<std::size_t>(
        std::llround(double(i) * steps / (count - 1)));
    const OrbitPoint& pt = orbit[idx];
    csv_row(os, {g17(pt.s), g17(pt.state.q), g17(pt.state.t),
                 g17(pt.state.p)});
  }
  os << "# observables: " << top.render() << "\n";
  write_artifact(out, os.str());
  if (!out.empty())
    write_artifact(out + ".observables.json", top.render() + "\n");
}

// --------------------------------------------------------------- verify --

int run_verify(bool quick, unsigned seed, const std::string& out) {
  const auto results = run_acceptance(quick, seed);
  print_acceptance(results, std::cout);
  if (!out.empty()) {
    RunManifest man("verify");
    man.fields.boolean("quick", quick);
    man.fields.integer("seed", seed);
    man.fields.text("out", out);
    std::ostringstream os;
    os << "# manifest: " << man.json() << "\n";
    print_acceptance(results, os);
    write_artifact(out, os.str());
  }
  return all_passed(results) ? 0 : 1;
}

void emit_error(bool as_json, const std::string& kind,
                const std::string& message) {
  if (as_json) {
    JsonRecord err;
    err.text("kind", kind);
    err.text("message", message);
    JsonRecord top;
    top.integer("schema_version", 1);
    top.raw("error", err.render());
    std::cerr << top.render() << "\n";
  } else {
    std::cerr << "mustring: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool json_errors = false;
  int rc = 0;

  CLI::App app{"spectral and canonical toolkit for a string with end masses"};
  app.require_subcommand(1);
  app.add_flag("--json-errors", json_errors,
               "report failures as one JSON object on stderr");

  std::string modes_config, modes_out;
  int modes_count = 16;
  auto* modes = app.add_subcommand(
      "modes", "frequency ladder with norms and endpoint data");
  modes->fallthrough();
  modes->add_option("--config", modes_config, "key = value parameter file");
  modes->add_option("--count", modes_count, "number of ladder rows")
      ->check(CLI::PositiveNumber);
  modes->add_option("--out", modes_out, "write here instead of stdout");

  std::string ev_config, ev_out, ev_preset = "gaussian";
  int ev_cutoff = 48, ev_count = 201;
  double ev_tol = 1e-10;
  auto* evolve = app.add_subcommand(
      "evolve", "time series of a string state over ten time units");
  evolve->fallthrough();
  evolve->add_option("--config", ev_config, "key = value parameter file");
  evolve->add_option("--preset", ev_preset,
                     "initial state: gaussian, mode:M, twomode:I,J");
  evolve->add_option("--cutoff", ev_cutoff, "modes kept in the expansion")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--count", ev_count, "rows in the time series")
      ->check(CLI::Range(2, 1000000));
  evolve->add_option("--tol", ev_tol, "projection and quadrature tolerance");
  evolve->add_option("--out", ev_out, "write here instead of stdout");

  std::string fk_config, fk_out, fk_preset = "factorization";
  int fk_count = 2000, fk_cutoff = 16;
  auto* fock = app.add_subcommand(
      "fock", "factorization diagnostic or boundary leak rate");
  fock->fallthrough();
  fock->add_option("--config", fk_config, "key = value parameter file");
  fock->add_option("--preset", fk_preset,
                   "diagnostic: factorization, rate:I,J");
  fock->add_option("--count", fk_count,
                   "overlap rows (factorization) or time samples (rate)")
      ->check(CLI::Range(2, 10000000));
  fock->add_option("--cutoff", fk_cutoff, "modes in the rate label space")
      ->check(CLI::PositiveNumber);
  fock->add_option("--out", fk_out, "write here instead of stdout");

  std::string bg_config, bg_out, bg_preset = "tilted:0.3";
  int bg_nmax = 40;
  double bg_tol = 1e-10;
  auto* bogo = app.add_subcommand(
      "bogoliubov", "classify the slice change and dump the beta matrix");
  bogo->fallthrough();
  bogo->add_option("--config", bg_config,
                   "massless-end parameter file (springs only)");
  bogo->add_option("--preset", bg_preset,
                   "final slice: flat:T0, tilted:S, bump:H");
  bogo->add_option("--nmax,--n", bg_nmax, "largest truncation size")
      ->check(CLI::PositiveNumber);
  bogo->add_option("--tol", bg_tol, "slice quadrature tolerance");
  bogo->add_option("--out", bg_out, "write here instead of stdout");

  std::string pm_out, pm_preset = "harmonic:1,unit";
  int pm_steps = 20000, pm_count = 201;
  auto* pmech = app.add_subcommand(
      "pmech", "parametrized particle orbit and gauge-fixed observables");
  pmech->fallthrough();
  pmech->add_option("--preset", pm_preset,
                    "POT[,LAPSE]: free|harmonic:K|quartic:L with "
                    "unit|constant:C|wavy:A");
  pmech->add_option("--cutoff", pm_steps, "integrator steps")
      ->check(CLI::PositiveNumber);
  pmech->add_option("--count", pm_count, "rows in the trajectory")
      ->check(CLI::Range(2, 10000000));
  pmech->add_option("--out", pm_out, "write here instead of stdout");

  std::string vf_out;
  bool vf_quick = false;
  unsigned vf_seed = 1729u;
  auto* verify = app.add_subcommand(
      "verify", "run the acceptance battery, one line per criterion");
  verify->fallthrough();
  verify->add_flag("--quick", vf_quick, "smaller cutoffs, same checks");
  verify->add_option("--seed", vf_seed, "seed for the randomized identities");
  verify->add_option("--out", vf_out, "also write the table to this file");

  modes->callback([&] { run_modes(modes_config, modes_count, modes_out); });
  evolve->callback([&] {
    run_evolve(ev_config, ev_preset, ev_cutoff, ev_count, ev_tol, ev_out);
  });
  fock->callback(
      [&] { run_fock(fk_config, fk_preset, fk_count, fk_cutoff, fk_out); });
  bogo->callback(
      [&] { run_bogoliubov(bg_config, bg_preset, bg_nmax, bg_tol, bg_out); });
  pmech->callback([&] { run_pmech(pm_preset, pm_steps, pm_count, pm_out); });
  verify->callback([&] { rc = run_verify(vf_quick, vf_seed, vf_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error(json_errors, "validation", e.what());
    return 1;
  } catch (const ValidationError& e) {
    emit_error(json_errors, "validation", e.what());
    return 1;
  } catch (const NumericalError& e) {
    emit_error(json_errors, "numerical", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error(json_errors, "internal", e.what());
    return 2;
  }
  return rc;
}
