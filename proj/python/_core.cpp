#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qineq/cli.hpp"
#include "qineq/energy.hpp"
#include "qineq/errors.hpp"
#include "qineq/modes.hpp"
#include "qineq/numerics.hpp"
#include "qineq/oracle.hpp"
#include "qineq/qi.hpp"

namespace py = pybind11;
using namespace qineq;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy density and quantum inequality for a scalar field between two delta barriers";

  // The module keeps the exception type alive, so a borrowed pointer is enough.
  static PyObject* error_type = py::register_exception<Error>(m, "Error", PyExc_RuntimeError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, instance.ptr());
    }
  });

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init([](double rel_tol, double abs_tol, int max_iter) {
             Tolerances t{rel_tol, abs_tol, max_iter};
             t.validate();
             return t;
           }),
           py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12, py::arg("max_iter") = 200)
      .def_readonly("rel_tol", &Tolerances::rel_tol)
      .def_readonly("abs_tol", &Tolerances::abs_tol)
      .def_readonly("max_iter", &Tolerances::max_iter);

  py::class_<QuadratureResult>(m, "QuadratureResult")
      .def_readonly("value", &QuadratureResult::value)
      .def_readonly("error_estimate", &QuadratureResult::error_estimate)
      .def_readonly("evaluations", &QuadratureResult::evaluations);

  py::enum_<Parity>(m, "Parity").value("ODD", Parity::Odd).value("EVEN", Parity::Even);
  py::enum_<NormCheck>(m, "NormCheck")
      .value("QUADRATURE", NormCheck::Quadrature)
      .value("ANTIDERIVATIVE", NormCheck::Antiderivative);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init(&PotentialSpec::make), py::arg("strength"), py::arg("separation") = 1.0)
      .def_static("from_coupling", &PotentialSpec::from_coupling, py::arg("coupling"), py::arg("separation") = 1.0)
      .def_readonly("strength", &PotentialSpec::strength)
      .def_readonly("separation", &PotentialSpec::separation)
      .def_property_readonly("coupling", &PotentialSpec::coupling)
      .def("__repr__", [](const PotentialSpec& p) {
        std::ostringstream s;
        s << "PotentialSpec(strength=" << p.strength << ", separation=" << p.separation << ")";
        return s.str();
      });

  py::class_<BoxSpec>(m, "BoxSpec")
      .def(py::init(&BoxSpec::make), py::arg("length"), py::arg("potential"))
      .def_readonly("length", &BoxSpec::length);

  py::class_<ScatteringData>(m, "ScatteringData")
      .def_readonly("amplitude", &ScatteringData::amplitude)
      .def_readonly("phase_shift", &ScatteringData::phase_shift);

  py::class_<ModeSolution>(m, "ModeSolution")
      .def_readonly("parity", &ModeSolution::parity)
      .def_readonly("index", &ModeSolution::index)
      .def_readonly("frequency", &ModeSolution::frequency)
      .def_readonly("free_frequency", &ModeSolution::free_frequency)
      .def_readonly("amplitude", &ModeSolution::amplitude)
      .def_readonly("phase_shift", &ModeSolution::phase_shift)
      .def_readonly("norm_length", &ModeSolution::norm_length)
      .def_readonly("norm_factor", &ModeSolution::norm_factor);

  py::class_<ModeResiduals>(m, "ModeResiduals")
      .def_readonly("norm", &ModeResiduals::norm)
      .def_readonly("continuity", &ModeResiduals::continuity)
      .def_readonly("jump_left", &ModeResiduals::jump_left)
      .def_readonly("jump_right", &ModeResiduals::jump_right)
      .def_readonly("boundary", &ModeResiduals::boundary)
      .def("max", &ModeResiduals::max);

  m.def("scattering_data", &scattering_data, py::arg("parity"), py::arg("omega"), py::arg("potential"));
  m.def("spectrum", &spectrum, py::arg("potential"), py::arg("box"), py::arg("n_max"),
        py::arg("tol") = Tolerances{});
  m.def("validate_mode", &validate_mode, py::arg("mode"), py::arg("potential"), py::arg("box"),
        py::arg("check") = NormCheck::Quadrature);

  py::class_<EtaComponents>(m, "EtaComponents")
      .def_readonly("eta1", &EtaComponents::eta1)
      .def_readonly("eta2", &EtaComponents::eta2)
      .def("sum", &EtaComponents::sum);

  py::class_<BetaParts>(m, "BetaParts")
      .def_readonly("spectral_integral", &BetaParts::spectral_integral)
      .def_readonly("cutoff_boundary", &BetaParts::cutoff_boundary)
      .def("value", &BetaParts::value);

  py::class_<DensityProfile>(m, "DensityProfile")
      .def_static("from_depth", &DensityProfile::from_depth, py::arg("eta"), py::arg("separation") = 1.0)
      .def_readonly("eta1", &DensityProfile::eta1)
      .def_readonly("eta2", &DensityProfile::eta2)
      .def_readonly("region1_value", &DensityProfile::region1_value)
      .def_readonly("eta", &DensityProfile::eta)
      .def_readonly("beta", &DensityProfile::beta)
      .def_readonly("separation", &DensityProfile::separation)
      .def_readonly("coupling", &DensityProfile::coupling)
      .def("at", &DensityProfile::at, py::arg("x"))
      .def("total_energy", &DensityProfile::total_energy);

  m.attr("MAX_BETA_COUPLING") = kMaxBetaCoupling;
  m.def("eta_components", &eta_components, py::arg("potential"),
        py::arg("tol") = Tolerances{1e-12, 1e-15, 400});
  m.def("region1_density_spectral", &region1_density_spectral, py::arg("potential"), py::arg("omega_start"),
        py::arg("tol") = Tolerances{});
  m.def("beta_components", &beta_components, py::arg("potential"), py::arg("tol") = Tolerances{});
  m.def("beta_coefficient", &beta_coefficient, py::arg("potential"), py::arg("tol") = Tolerances{});
  m.def("density_profile", &density_profile, py::arg("potential"), py::arg("tol") = Tolerances{});

  py::enum_<SamplingKind>(m, "SamplingKind")
      .value("LORENTZIAN", SamplingKind::Lorentzian)
      .value("GAUSSIAN", SamplingKind::Gaussian)
      .value("TABULATED", SamplingKind::Tabulated);

  py::class_<SamplingFunction>(m, "SamplingFunction")
      .def_static("lorentzian", &SamplingFunction::lorentzian, py::arg("tau"))
      .def_static("gaussian", &SamplingFunction::gaussian, py::arg("sigma"))
      .def_static("tabulated", &SamplingFunction::tabulated, py::arg("x"), py::arg("rho"))
      .def_property_readonly("kind", &SamplingFunction::kind)
      .def_property_readonly("scale", &SamplingFunction::scale)
      .def("density", &SamplingFunction::density, py::arg("x"))
      .def("derivative", &SamplingFunction::derivative, py::arg("x"))
      .def("scaled", &SamplingFunction::scaled, py::arg("s"))
      .def("mass_between", &SamplingFunction::mass_between, py::arg("lo"), py::arg("hi"));

  py::class_<QIBound>(m, "QIBound")
      .def_readonly("quadrature", &QIBound::quadrature)
      .def_readonly("closed_form", &QIBound::closed_form)
      .def_readonly("divergent", &QIBound::divergent)
      .def_readonly("error_estimate", &QIBound::error_estimate);

  py::class_<QIReport>(m, "QIReport")
      .def_readonly("tau", &QIReport::tau)
      .def_readonly("lhs", &QIReport::lhs)
      .def_readonly("bound_closed_form", &QIReport::bound_closed_form)
      .def_readonly("bound_quadrature", &QIReport::bound_quadrature)
      .def_readonly("violated_vs_closed_form", &QIReport::violated_vs_closed_form)
      .def_readonly("violated_vs_quadrature", &QIReport::violated_vs_quadrature)
      .def_readonly("ratio", &QIReport::ratio)
      .def_readonly("bound_factor", &QIReport::bound_factor)
      .def_readonly("critical_tau_closed_form", &QIReport::critical_tau_closed_form)
      .def_readonly("critical_tau_quadrature", &QIReport::critical_tau_quadrature);

  m.def("qi_bound", &qi_bound, py::arg("rho"), py::arg("tol") = Tolerances{1e-12, 1e-15, 400});
  m.def("weighted_density", &weighted_density, py::arg("profile"), py::arg("rho"),
        py::arg("tol") = Tolerances{1e-13, 1e-16, 400});
  m.def("violation_report", py::overload_cast<const DensityProfile&, double>(&violation_report),
        py::arg("profile"), py::arg("tau"));
  m.def("violation_report", py::overload_cast<const PotentialSpec&, double>(&violation_report),
        py::arg("potential"), py::arg("tau"));

  py::class_<FiniteBoxRun>(m, "FiniteBoxRun")
      .def(py::init(&FiniteBoxRun::make), py::arg("potential"), py::arg("box"), py::arg("n_max"),
           py::arg("validation") = NormCheck::Antiderivative)
      .def_property_readonly("n_max", &FiniteBoxRun::n_max)
      .def_property_readonly("modes", &FiniteBoxRun::modes);

  py::class_<ModeSum>(m, "ModeSum")
      .def_readonly("value", &ModeSum::value)
      .def_readonly("tail_bound", &ModeSum::tail_bound)
      .def_readonly("truncated_sum", &ModeSum::truncated_sum);

  py::class_<Extrapolation>(m, "Extrapolation")
      .def_readonly("limit", &Extrapolation::limit)
      .def_readonly("slope", &Extrapolation::slope)
      .def_readonly("residual", &Extrapolation::residual)
      .def_readonly("exponent", &Extrapolation::exponent)
      .def_readonly("coefficient", &Extrapolation::coefficient)
      .def_readonly("lengths", &Extrapolation::lengths)
      .def_readonly("values", &Extrapolation::values);

  py::class_<JumpReport>(m, "JumpReport")
      .def_readonly("total_jump", &JumpReport::total_jump)
      .def_readonly("region1_sum", &JumpReport::region1_sum)
      .def_readonly("region2_sum", &JumpReport::region2_sum)
      .def_readonly("density_difference", &JumpReport::density_difference)
      .def_readonly("max_relative_mismatch", &JumpReport::max_relative_mismatch);

  m.def("default_n_max", &default_n_max, py::arg("potential"), py::arg("box"), py::arg("cutoff_factor") = 40.0);
  m.def("finite_box_density", &finite_box_density, py::arg("run"), py::arg("x"));
  m.def("continuum_extrapolate", &continuum_extrapolate, py::arg("potential"), py::arg("lengths"), py::arg("x"),
        py::arg("cutoff_factor") = 40.0);
  m.def("jump_consistency", &jump_consistency, py::arg("run"));
  m.def("integrated_box_energy", &integrated_box_energy, py::arg("run"));
  m.def("shooting_extrapolated", &shooting_extrapolated, py::arg("potential"), py::arg("box"), py::arg("widths"),
        py::arg("k_max"));
  m.def("lowest_frequencies", &lowest_frequencies, py::arg("potential"), py::arg("box"), py::arg("k_max"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv = {"qineq"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
