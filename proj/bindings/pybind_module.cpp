// Python face of the core library. Bindings stay close to the C++ names;
// the only renames are python keywords (CriterionResult.pass -> passed).

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mustring/acceptance.hpp"
#include "mustring/bogoliubov.hpp"
#include "mustring/dynamics.hpp"
#include "mustring/fock.hpp"
#include "mustring/io.hpp"
#include "mustring/model.hpp"
#include "mustring/mu_space.hpp"
#include "mustring/param_mech.hpp"
#include "mustring/spectrum.hpp"

namespace py = pybind11;
using namespace mustring;

PYBIND11_MODULE(_mustring, m) {
  m.doc() =
      "spectral and canonical toolkit for a string with point masses and "
      "springs at its ends";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  // ---- model ----

  py::enum_<End>(m, "End")
      .value("Left", End::Left)
      .value("Right", End::Right);
  m.def("end_sign", &end_sign);

  py::class_<StringParams>(m, "StringParams")
      .def(py::init<>())
      .def_readwrite("rho", &StringParams::rho)
      .def_readwrite("gamma", &StringParams::gamma)
      .def_readwrite("ell", &StringParams::ell)
      .def_readwrite("m0", &StringParams::m0)
      .def_readwrite("ml", &StringParams::ml)
      .def_readwrite("k0", &StringParams::k0)
      .def_readwrite("kl", &StringParams::kl)
      .def_readwrite("eps0", &StringParams::eps0)
      .def_readwrite("epsl", &StringParams::epsl)
      .def("__repr__", [](const StringParams& p) {
        return "StringParams(" + params_json(p) + ")";
      });

  py::class_<DerivedConstants>(m, "DerivedConstants")
      .def_readonly("rho", &DerivedConstants::rho)
      .def_readonly("gamma", &DerivedConstants::gamma)
      .def_readonly("ell", &DerivedConstants::ell)
      .def_readonly("mu0", &DerivedConstants::mu0)
      .def_readonly("mul", &DerivedConstants::mul)
      .def_readonly("r0", &DerivedConstants::r0)
      .def_readonly("rl", &DerivedConstants::rl)
      .def_readonly("alpha0", &DerivedConstants::alpha0)
      .def_readonly("alphal", &DerivedConstants::alphal)
      .def_readonly("c0", &DerivedConstants::c0)
      .def_readonly("cl", &DerivedConstants::cl)
      .def_readonly("has_measure", &DerivedConstants::has_measure)
      .def("mu", &DerivedConstants::mu)
      .def("r", &DerivedConstants::r)
      .def("alpha", &DerivedConstants::alpha)
      .def("c", &DerivedConstants::c);

  m.def("validate", &validate);
  m.def("require_spectral", &require_spectral);
  m.def("solve_alpha", &solve_alpha, py::arg("mu"), py::arg("r"));
  m.def("reduce", &reduce);
  m.def("derive_constants", &derive_constants);

  // ---- io ----

  m.def("parse_config", &parse_config, py::arg("text"),
        py::arg("origin") = "config");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("g17", &g17);

  // ---- spectrum ----

  py::class_<Mode>(m, "Mode")
      .def_readonly("interval", &Mode::interval)
      .def_readonly("omega", &Mode::omega)
      .def_readonly("gm", &Mode::gm);

  py::class_<ModeTable>(m, "ModeTable")
      .def_readonly("params", &ModeTable::params)
      .def_readonly("d", &ModeTable::d)
      .def_readonly("modes", &ModeTable::modes)
      .def_readonly("max_interval", &ModeTable::max_interval)
      .def_readonly("double_root_interval", &ModeTable::double_root_interval)
      .def_readonly("exceptional", &ModeTable::exceptional)
      .def("count", &ModeTable::count)
      .def("in_interval", &ModeTable::in_interval)
      .def("by_interval", &ModeTable::by_interval,
           py::return_value_policy::copy);

  m.def("freq_eq", &freq_eq);
  m.def("freq_eq_deriv", &freq_eq_deriv);
  m.def("find_modes", &find_modes, py::arg("params"), py::arg("max_interval"));
  m.def("mode_profile", &mode_profile, py::arg("d"), py::arg("omega"),
        py::arg("x"), py::arg("order") = 0);
  m.def("gm2_closed_form", &gm2_closed_form);
  m.def("gm2_quadrature", &gm2_quadrature, py::arg("d"), py::arg("omega"),
        py::arg("tol") = 1e-12);
  m.def("mode_hat_end", &mode_hat_end);
  m.def("omega_asymptotic", &omega_asymptotic);
  m.def("inv_gm_asymptotic", &inv_gm_asymptotic);
  m.def("completeness_end_sum", &completeness_end_sum);
  m.def("completeness_cross_sum", &completeness_cross_sum);
  m.def("completeness_tail_estimate", &completeness_tail_estimate);

  // ---- mu space ----

  py::enum_<Smoothness>(m, "Smoothness")
      .value("L2", Smoothness::L2)
      .value("H1", Smoothness::H1)
      .value("H2", Smoothness::H2);

  py::class_<MuFunction>(m, "MuFunction")
      .def_readwrite("v0", &MuFunction::v0)
      .def_readwrite("vl", &MuFunction::vl)
      .def_readwrite("tag", &MuFunction::tag)
      .def("__call__",
           [](const MuFunction& f, double x) { return f.interior(x); })
      .def("trace", &MuFunction::trace);

  m.def("make_smooth", &make_smooth, py::arg("f"), py::arg("ell"),
        py::arg("df") = std::function<double(double)>{},
        py::arg("d2f") = std::function<double(double)>{});
  m.def("make_hat_mode", &make_hat_mode);
  m.def("deriv1", &deriv1);
  m.def("deriv2", &deriv2);
  m.def("robin_weight", &robin_weight);
  m.def("inner_mu", &inner_mu, py::arg("f"), py::arg("g"), py::arg("d"),
        py::arg("tol") = 1e-10);
  m.def("modified_inner", &modified_inner, py::arg("f"), py::arg("g"),
        py::arg("d"), py::arg("tol") = 1e-10);
  m.def("rn_derivative", &rn_derivative);
  m.def("mu_product_derivative", &mu_product_derivative);
  m.def("laplacian_mu", &laplacian_mu);
  m.def("robin_domain_residual", &robin_domain_residual);

  // ---- dynamics ----

  py::class_<CauchyData>(m, "CauchyData")
      .def(py::init<>())
      .def_readwrite("Q", &CauchyData::Q)
      .def_readwrite("P", &CauchyData::P);

  py::class_<ModeCoeffs>(m, "ModeCoeffs")
      .def(py::init<>())
      .def_readwrite("pos", &ModeCoeffs::pos)
      .def_readwrite("vel", &ModeCoeffs::vel);

  py::class_<Residual>(m, "Residual")
      .def_readonly("value", &Residual::value)
      .def_readonly("scale", &Residual::scale);

  py::class_<BoundaryDofs>(m, "BoundaryDofs")
      .def(py::init<>())
      .def_readwrite("q0", &BoundaryDofs::q0)
      .def_readwrite("p0", &BoundaryDofs::p0)
      .def_readwrite("lambda0", &BoundaryDofs::lambda0)
      .def_readwrite("ql", &BoundaryDofs::ql)
      .def_readwrite("pl", &BoundaryDofs::pl)
      .def_readwrite("lambdal", &BoundaryDofs::lambdal);

  py::class_<EndChain>(m, "EndChain")
      .def_readonly("c1", &EndChain::c1)
      .def_readonly("c2", &EndChain::c2)
      .def_readonly("c3", &EndChain::c3)
      .def_readonly("on_q", &EndChain::on_q)
      .def_readonly("on_p", &EndChain::on_p);

  py::class_<ConstraintChain>(m, "ConstraintChain")
      .def_readonly("left", &ConstraintChain::left)
      .def_readonly("right", &ConstraintChain::right);

  py::class_<TwoMassState>(m, "TwoMassState")
      .def(py::init<>())
      .def_readwrite("q0", &TwoMassState::q0)
      .def_readwrite("v0", &TwoMassState::v0)
      .def_readwrite("ql", &TwoMassState::ql)
      .def_readwrite("vl", &TwoMassState::vl);

  m.def("temporal_frequency", &temporal_frequency);
  m.def("project", &project, py::arg("data"), py::arg("table"),
        py::arg("tol") = 1e-10);
  m.def("coeffs_at", &coeffs_at);
  m.def("synthesize", &synthesize);
  m.def("field_deriv", &field_deriv, py::arg("c"), py::arg("table"),
        py::arg("t"), py::arg("x"), py::arg("space_order") = 0,
        py::arg("time_order") = 0);
  m.def("evolve", &evolve, py::arg("data"), py::arg("t"), py::arg("table"),
        py::arg("tol") = 1e-10, py::arg("max_discard") = 1e-6);
  m.def("energy", &energy, py::arg("data"), py::arg("d"),
        py::arg("tol") = 1e-10);
  m.def("energy_spectral", &energy_spectral);
  m.def("boundary_ode_residual", &boundary_ode_residual);
  m.def("constraint_chain",
        py::overload_cast<const ModeCoeffs&, const ModeTable&, int, double,
                          const std::optional<BoundaryDofs>&>(
            &constraint_chain),
        py::arg("c"), py::arg("table"), py::arg("K"), py::arg("t"),
        py::arg("dofs") = std::optional<BoundaryDofs>{});
  m.def("constraint_chain",
        py::overload_cast<const CauchyData&, int, const StringParams&,
                          const DerivedConstants&,
                          const std::optional<BoundaryDofs>&>(
            &constraint_chain),
        py::arg("data"), py::arg("K"), py::arg("params"), py::arg("d"),
        py::arg("dofs") = std::optional<BoundaryDofs>{});
  m.def("two_mass_limit", &two_mass_limit);
  m.def("gaussian_data", &gaussian_data, py::arg("d"),
        py::arg("center_frac") = 0.5, py::arg("width_frac") = 0.1);
  m.def("single_mode_coeffs", &single_mode_coeffs, py::arg("table"),
        py::arg("index"), py::arg("amplitude") = 1.0);
  m.def("two_mode_coeffs", &two_mode_coeffs);

  // ---- fock ----

  py::class_<OneParticleVector>(m, "OneParticleVector")
      .def(py::init<>())
      .def(py::init([](std::vector<Complex> v) {
        OneParticleVector o;
        o.c = std::move(v);
        return o;
      }))
      .def_readwrite("c", &OneParticleVector::c);

  py::class_<SplitCoeffs>(m, "SplitCoeffs")
      .def_readonly("pos", &SplitCoeffs::pos)
      .def_readonly("neg", &SplitCoeffs::neg);

  py::class_<FockState>(m, "FockState")
      .def_readonly("modes", &FockState::modes)
      .def_readonly("nmax", &FockState::nmax)
      .def_readonly("overflow", &FockState::overflow)
      // occupation tuples as dict keys; the map itself keeps vector keys
      .def_property_readonly("amp", [](const FockState& s) {
        py::dict out;
        for (const auto& [key, val] : s.amp)
          out[py::tuple(py::cast(key))] = val;
        return out;
      });

  py::class_<NonUnitarityReport>(m, "NonUnitarityReport")
      .def_readonly("omega0", &NonUnitarityReport::omega0)
      .def_readonly("trace_abs2", &NonUnitarityReport::trace_abs2)
      .def_readonly("rate", &NonUnitarityReport::rate);

  py::class_<FactorReport>(m, "FactorReport")
      .def_readonly("coeff", &FactorReport::coeff)
      .def_readonly("partial", &FactorReport::partial)
      .def_readonly("lead", &FactorReport::lead);

  m.def("inner_plus", &inner_plus);
  m.def("split_coefficients", &split_coefficients);
  m.def("positive_frequency_split", &positive_frequency_split,
        py::arg("data"), py::arg("table"), py::arg("tol") = 1e-10);
  m.def("vacuum", &vacuum, py::arg("modes"), py::arg("nmax"));
  m.def("norm2", &norm2);
  m.def("fock_inner", &fock_inner);
  m.def("create", &create);
  m.def("annihilate", &annihilate);
  m.def("coherent_state", &coherent_state, py::arg("v"), py::arg("nmax"),
        py::arg("tail_tol") = 1e-8);
  m.def("second_quantize_map", &second_quantize_map);
  m.def("lifted_hamiltonian", &lifted_hamiltonian);
  m.def("evolve_label", &evolve_label);
  m.def("trace_nonunitarity_rate", &trace_nonunitarity_rate, py::arg("v0"),
        py::arg("t"), py::arg("table"));
  m.def("factorization_diagnostic", &factorization_diagnostic,
        py::arg("table"), py::arg("n"));

  // ---- bogoliubov ----

  py::class_<Embedding>(m, "Embedding")
      .def_readonly("ell", &Embedding::ell)
      .def("slope0", &Embedding::slope0)
      .def("slopel", &Embedding::slopel)
      .def("t", [](const Embedding& e, double s) { return e.t(s); })
      .def("x", [](const Embedding& e, double s) { return e.x(s); })
      .def("dt", [](const Embedding& e, double s) { return e.dt(s); })
      .def("dx", [](const Embedding& e, double s) { return e.dx(s); });

  m.def("validate_embedding", &validate_embedding);
  m.def("flat_embedding", &flat_embedding, py::arg("ell"),
        py::arg("t0") = 0.0);
  m.def("tilted_embedding", &tilted_embedding, py::arg("ell"), py::arg("s"),
        py::arg("at"), py::arg("t0") = 0.0);
  m.def("bump_embedding", &bump_embedding, py::arg("ell"), py::arg("height"),
        py::arg("t0") = 0.0);
  m.def("reparametrize", &reparametrize);

  py::enum_<BcKind>(m, "BcKind")
      .value("Dirichlet", BcKind::Dirichlet)
      .value("Robin", BcKind::Robin);

  py::class_<BoundaryCondition>(m, "BoundaryCondition")
      .def(py::init<>())
      .def_readwrite("kind", &BoundaryCondition::kind)
      .def_readwrite("r0", &BoundaryCondition::r0)
      .def_readwrite("rl", &BoundaryCondition::rl);

  py::class_<ExpMode>(m, "ExpMode")
      .def_readonly("k", &ExpMode::k)
      .def_readonly("omega", &ExpMode::omega);

  py::class_<ExpModeBasis>(m, "ExpModeBasis")
      .def_readonly("bc", &ExpModeBasis::bc)
      .def_readonly("ell", &ExpModeBasis::ell)
      .def_readonly("zero_mode", &ExpModeBasis::zero_mode)
      .def_readonly("modes", &ExpModeBasis::modes)
      .def("count", &ExpModeBasis::count)
      .def("is_zero", &ExpModeBasis::is_zero)
      .def("profile", &ExpModeBasis::profile)
      .def("profile_d", &ExpModeBasis::profile_d)
      .def("sol", &ExpModeBasis::sol)
      .def("sol_dt", &ExpModeBasis::sol_dt)
      .def("sol_dx", &ExpModeBasis::sol_dx);

  m.def("exp_modes", &exp_modes, py::arg("bc"), py::arg("count"),
        py::arg("ell"));
  m.def("frequency_residual", &frequency_residual);

  py::class_<ModeSolution>(m, "ModeSolution")
      .def(py::init<>())
      .def_readwrite("pos", &ModeSolution::pos)
      .def_readwrite("neg", &ModeSolution::neg);

  py::class_<QuadControl>(m, "QuadControl")
      .def(py::init<>())
      .def_readwrite("min_panels", &QuadControl::min_panels)
      .def_readwrite("per_pi", &QuadControl::per_pi)
      .def_readwrite("tol", &QuadControl::tol);

  m.def("kg_pairing", &kg_pairing, py::arg("basis"), py::arg("s1"),
        py::arg("s2"), py::arg("X"), py::arg("q") = QuadControl{});

  py::class_<TransportEntry>(m, "TransportEntry")
      .def_readonly("gamma", &TransportEntry::gamma)
      .def_readonly("beta", &TransportEntry::beta);

  m.def("transport_coefficients", &transport_coefficients, py::arg("XI"),
        py::arg("XF"), py::arg("basis"), py::arg("l"), py::arg("m"),
        py::arg("q") = QuadControl{});
  m.def("beta", &beta, py::arg("XI"), py::arg("XF"), py::arg("basis"),
        py::arg("l"), py::arg("m"), py::arg("q") = QuadControl{});
  m.def("beta_asymptotic", &beta_asymptotic);

  py::class_<UnitarityReport>(m, "UnitarityReport")
      .def_readonly("unitary", &UnitarityReport::unitary)
      .def_readonly("slope_i0", &UnitarityReport::slope_i0)
      .def_readonly("slope_il", &UnitarityReport::slope_il)
      .def_readonly("slope_f0", &UnitarityReport::slope_f0)
      .def_readonly("slope_fl", &UnitarityReport::slope_fl)
      .def_readonly("sizes", &UnitarityReport::sizes)
      .def_readonly("partial", &UnitarityReport::partial)
      .def_readonly("increment", &UnitarityReport::increment)
      .def_readonly("floor", &UnitarityReport::floor)
      .def_readonly("increments_converged",
                    &UnitarityReport::increments_converged)
      .def_readonly("abs_beta", &UnitarityReport::abs_beta);

  m.def("unitarity_classification", &unitarity_classification, py::arg("XI"),
        py::arg("XF"), py::arg("basis"), py::arg("max_size"),
        py::arg("threads") = 0, py::arg("q") = QuadControl{});

  // ---- parametrized particle ----

  py::class_<PMState>(m, "PMState")
      .def(py::init<>())
      .def(py::init([](double q, double t, double p) {
        return PMState{q, t, p};
      }))
      .def_readwrite("q", &PMState::q)
      .def_readwrite("t", &PMState::t)
      .def_readwrite("p", &PMState::p);

  py::class_<PMTangent>(m, "PMTangent")
      .def_readonly("yq", &PMTangent::yq)
      .def_readonly("yt", &PMTangent::yt)
      .def_readonly("yp", &PMTangent::yp);

  py::class_<Potential>(m, "Potential")
      .def("w", [](const Potential& w, double q) { return w.w(q); })
      .def("dw", [](const Potential& w, double q) { return w.dw(q); });

  m.def("free_potential", &free_potential);
  m.def("harmonic_potential", &harmonic_potential, py::arg("k"));
  m.def("quartic_potential", &quartic_potential, py::arg("lam"));

  py::class_<Lapse>(m, "Lapse")
      .def_readonly("sign_definite", &Lapse::sign_definite)
      .def("value", [](const Lapse& n, double s, const PMState& st) {
        return n.value(s, st);
      });

  m.def("unit_lapse", &unit_lapse);
  m.def("constant_lapse", &constant_lapse, py::arg("c"));
  m.def("wavy_lapse", &wavy_lapse, py::arg("a"));

  py::class_<OrbitPoint>(m, "OrbitPoint")
      .def_readonly("s", &OrbitPoint::s)
      .def_readonly("state", &OrbitPoint::state);

  m.def("hamiltonian_field", &hamiltonian_field);
  m.def("integrate_orbit", &integrate_orbit, py::arg("start"), py::arg("n"),
        py::arg("mass"), py::arg("w"), py::arg("s0"), py::arg("s1"),
        py::arg("steps"));
  m.def("gauge_fix", &gauge_fix, py::arg("orbit"), py::arg("tau"));

  py::enum_<ObservableKind>(m, "ObservableKind")
      .value("Energy", ObservableKind::Energy)
      .value("Projection", ObservableKind::Projection);

  m.def("observable", &observable);
  m.def("parametrized_energy", &parametrized_energy);
  m.def("lifted_pi_component", &lifted_pi_component);

  // ---- acceptance ----

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("number", &CriterionResult::number)
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("passed", &CriterionResult::pass)
      .def_readonly("seconds", &CriterionResult::seconds)
      .def_readonly("detail", &CriterionResult::detail);

  m.def("run_acceptance", &run_acceptance, py::arg("quick"),
        py::arg("seed") = 1729u);
}
