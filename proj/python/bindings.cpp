#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "beamdecay/certificate.hpp"
#include "beamdecay/cli.hpp"
#include "beamdecay/error.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/problem_file.hpp"
#include "beamdecay/stationary.hpp"

namespace py = pybind11;
namespace bd = beamdecay;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

bd::ValidatedProblem load(const std::filesystem::path& path, const std::vector<std::string>& sets) {
  bd::ProblemFile f = bd::load_problem_file(path);
  for (const auto& s : sets) bd::apply_override(f, s);
  return bd::build_problem(f);
}

bd::ValidatedProblem parse(const std::string& text, const std::vector<std::string>& sets) {
  bd::ProblemFile f = bd::parse_problem_text(text);
  for (const auto& s : sets) bd::apply_override(f, s);
  return bd::build_problem(f);
}

py::dict records_dict(const std::vector<bd::EnergyRecord>& records) {
  std::vector<double> t, E, H, diss, l2u, h2u, l2v, sup;
  for (const auto& r : records) {
    t.push_back(r.t);
    E.push_back(r.E);
    H.push_back(r.H);
    diss.push_back(r.dissipation);
    l2u.push_back(r.l2_u);
    h2u.push_back(r.h2star_u);
    l2v.push_back(r.l2_v);
    sup.push_back(r.sup_u);
  }
  py::dict d;
  d["t"] = to_array(t);
  d["E"] = to_array(E);
  d["H"] = to_array(H);
  d["dissipation"] = to_array(diss);
  d["l2_u"] = to_array(l2u);
  d["h2star_u"] = to_array(h2u);
  d["l2_v"] = to_array(l2v);
  d["sup_u"] = to_array(sup);
  return d;
}

py::dict certificate_dict(const bd::Certificate& c) {
  py::dict d;
  for (const auto& e : c.trace) d[py::str(e.name)] = e.value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Damped hinged beam simulator with explicit decay certificates";

  auto base = py::register_exception<bd::Error>(m, "Error");
  py::register_exception<bd::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<bd::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<bd::ProvenanceError>(m, "ProvenanceError", base.ptr());
  py::register_exception<bd::SolverError>(m, "SolverError", base.ptr());

  py::class_<bd::ValidatedProblem>(m, "Problem")
      .def_property_readonly("N", [](const bd::ValidatedProblem& p) { return p.grid().subdivisions(); })
      .def_property_readonly("length", [](const bd::ValidatedProblem& p) { return p.grid().length(); })
      .def_property_readonly("nodes", [](const bd::ValidatedProblem& p) { return to_array(p.grid().nodes()); })
      .def_property_readonly("digest", &bd::ValidatedProblem::provenance)
      .def_property_readonly("certificate_admissible", &bd::ValidatedProblem::certificate_admissible)
      .def_property_readonly("inadmissible_reason", &bd::ValidatedProblem::inadmissible_reason);

  m.def("load_problem", &load, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("parse_problem", &parse, py::arg("text"), py::arg("overrides") = std::vector<std::string>{});

  m.def(
      "simulate",
      [](const bd::ValidatedProblem& p, std::optional<double> eps) {
        bd::Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = bd::simulate(p, bd::SimulateOptions{eps, false});
        }
        py::dict d = records_dict(traj.records);
        d["steps"] = traj.stats.steps;
        d["newton_iterations"] = traj.stats.total_newton_iterations;
        return d;
      },
      py::arg("problem"), py::arg("eps") = py::none(),
      "Integrate and return the energy records as numpy arrays.");

  m.def("certify", [](const bd::ValidatedProblem& p) { return certificate_dict(bd::compute_certificate(p)); },
        py::arg("problem"));
  m.def(
      "certificate_constants",
      [](double a1, double a2, double mm, double B, double k_inf, double E0) {
        return certificate_dict(bd::compute_certificate(bd::CertificateInputs{a1, a2, mm, B, k_inf, E0}));
      },
      py::arg("a1"), py::arg("a2"), py::arg("m"), py::arg("B"), py::arg("k_inf"), py::arg("E0"));

  m.def(
      "audit",
      [](const bd::ValidatedProblem& p, double tol) {
        const bd::Certificate c = bd::compute_certificate(p);
        bd::Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = bd::simulate(p, bd::SimulateOptions{c.eps, false});
        }
        const bd::AuditReport rep = bd::verify_trajectory(traj, c, tol);
        py::dict d;
        for (const auto& chk : rep.checks) d[py::str(chk.name)] = py::make_tuple(chk.passed, chk.worst_margin);
        return d;
      },
      py::arg("problem"), py::arg("tol") = bd::kDefaultAuditTolerance,
      "Simulate with the certificate's eps and audit the run; returns {check: (passed, margin)}.");

  m.def(
      "solve_stationary",
      [](const bd::ValidatedProblem& p, double tol) {
        const bd::StationarySolution s = bd::solve_stationary(p, tol);
        py::dict d;
        d["u_hat"] = to_array(s.u_hat);
        d["residual_norm"] = s.residual_norm;
        d["newton_iterations"] = s.newton_iterations;
        d["residual_history"] = to_array(s.residual_history);
        return d;
      },
      py::arg("problem"), py::arg("tol") = 1e-10);

  m.def(
      "discrete_constants",
      [](double c, double d, std::size_t N) {
        const bd::DiscreteConstants k = bd::discrete_constants(bd::Grid(bd::BeamDomain{c, d}, N));
        return py::dict(py::arg("B") = k.B, py::arg("k_inf") = k.k_inf, py::arg("mu1") = k.mu1);
      },
      py::arg("c"), py::arg("d"), py::arg("N"));

  m.def(
      "fit_decay_rate",
      [](const std::vector<double>& t, const std::vector<double>& v, std::optional<double> lo,
         std::optional<double> hi) {
        const bd::DecayFit f = (lo || hi)
                                   ? bd::fit_decay_rate(t, v, {lo.value_or(t.front()), hi.value_or(t.back())})
                                   : bd::fit_decay_rate(t, v);
        return py::make_tuple(f.rate, f.intercept);
      },
      py::arg("t"), py::arg("values"), py::arg("lo") = py::none(), py::arg("hi") = py::none(),
      "Least-squares log-linear rate; defaults to the window [T/2, T].");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"beamdecay"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = bd::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
