#include "beamdecay/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "beamdecay/error.hpp"
#include "beamdecay/nonlinearity.hpp"

namespace beamdecay {

double Certificate::value(const std::string& name) const {
  for (const TraceEntry& e : trace) {
    if (e.name == name) return e.value;
  }
  throw Error("certificate: no trace entry '" + name + "'");
}

double young_conjugate_constant(double m, double delta) {
  if (!(m > 1.0) || !(delta > 0.0)) throw Error("young_conjugate_constant: need m > 1, delta > 0");
  return ((m - 1.0) / m) * std::pow(m * delta, -1.0 / (m - 1.0));
}

Certificate compute_certificate(const CertificateInputs& in) {
  if (!(in.E0 > 0.0)) throw Error("certificate: E(0) = 0: decay is trivial");
  if (!(in.a1 > 0.0) || in.a1 > in.a2) throw Error("certificate: require 0 < a1 <= a2");
  if (!(in.m >= 2.0)) throw Error("certificate: require m >= 2");
  if (!(in.B > 0.0) || !(in.k_inf > 0.0)) throw Error("certificate: require B > 0 and k_inf > 0");

  Certificate c;
  c.a1 = in.a1;
  c.a2 = in.a2;
  c.m = in.m;
  c.E0 = in.E0;
  c.B = in.B;
  c.k_inf = in.k_inf;
  auto& tr = c.trace;
  auto push = [&tr](std::string name, double v, std::string formula) {
    tr.push_back({std::move(name), v, std::move(formula)});
    return v;
  };

  const double B2 = in.B * in.B;
  push("a1", in.a1, "declared lower damping coefficient");
  push("a2", in.a2, "declared upper damping coefficient");
  push("m", in.m, "damping exponent");
  push("E0", in.E0, "1/2 (u1,u1)_h + 1/2 (A u0,u0)_h");
  push("B", in.B, "1/lambda_1, lambda_1 = 4 sin^2(pi h/(2 L))/h^2");
  push("k_inf", in.k_inf, "(sqrt(L)/2) sqrt(B)");
  c.M = push("M", in.k_inf * std::sqrt(2.0 * in.E0), "k_inf sqrt(2 E0)");

  const PowerBoundConstant pb = power_bound_gamma(c.M, in.m);
  c.gamma = push("gamma", pb.gamma, "M^(m-2)");
  push("gamma_lipschitz", pb.gamma_lipschitz, "((m/2) M^(m/2-1))^2 >= gamma");

  // delta and eps are rounded down until each chain inequality holds as
  // evaluated in floating point, not merely up to rounding.
  double delta = 1.0 / (4.0 * in.a2 * c.gamma * B2);
  while (in.a2 * c.gamma * delta * B2 > 0.25) delta = std::nextafter(delta, 0.0);
  c.delta = push("delta", delta, "1/(4 a2 gamma B^2), rounded down");
  push("delta_b1_form", B2 / (4.0 * in.a2 * c.gamma), "B^2/(4 a2 gamma); equals delta at B = 1");
  c.c_delta = push("c_delta", young_conjugate_constant(in.m, c.delta),
                   "((m-1)/m) (m delta)^(-1/(m-1))");
  const double cauchy = push("cauchy_coefficient", in.a2 * in.a2 * B2, "a2^2 B^2");
  push("cauchy_coefficient_b1_form", in.a2 * in.a2 * in.B, "a2^2 B; equals a2^2 B^2 at B = 1");
  c.kappa = push("kappa", std::max(in.B, B2), "max(B, B^2)");

  const double eps_young = push("eps_young", in.a1 / (in.a2 * c.c_delta), "a1/(a2 c_delta)");
  const double eps_cauchy = push("eps_cauchy", in.a1 / (1.5 + cauchy), "a1/(3/2 + a2^2 B^2)");
  const double eps_cap = push("eps_cap", 1.0 / (2.0 * c.kappa), "1/(2 kappa)");
  double eps = std::min({eps_young, eps_cauchy, eps_cap});
  while (in.a2 * c.c_delta * eps > in.a1 || (1.5 + cauchy) * eps > in.a1 || eps * c.kappa > 0.5) {
    eps = std::nextafter(eps, 0.0);
  }
  c.eps = push("eps", eps, "min(eps_young, eps_cauchy, eps_cap), rounded down");
  c.r = push("r", c.eps / (1.0 + c.eps * c.kappa), "eps/(1 + eps kappa)");
  c.prefactor = push("prefactor", 1.0 / (1.0 - c.eps * c.kappa), "1/(1 - eps kappa)");
  return c;
}

Certificate compute_certificate(const ValidatedProblem& problem, double E0,
                                const DiscreteConstants& constants) {
  if (!problem.certificate_admissible()) throw ValidationError(*problem.inadmissible_reason());
  const DampingSpec& d = problem.damping();
  Certificate c = compute_certificate(
      CertificateInputs{d.a1, d.a2, d.m, constants.B, constants.k_inf, E0});
  c.provenance = problem.provenance();
  return c;
}

Certificate compute_certificate(const ValidatedProblem& problem) {
  const State s0{0.0, problem.initial().u0, problem.initial().u1};
  return compute_certificate(problem, energy(s0, problem.op()), discrete_constants(problem.grid()));
}

bool AuditReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

void note(CheckResult& check, double margin, std::size_t index, double t) {
  check.worst_margin = std::max(check.worst_margin, margin);
  if (margin > 0.0 && !check.first_violation) {
    check.passed = false;
    check.first_violation = index;
    check.first_violation_time = t;
  }
}

}  // namespace

AuditReport verify_trajectory(std::span<const EnergyRecord> records, const Certificate& cert,
                              double tol) {
  if (!(tol >= 0.0)) throw Error("verify_trajectory: tol must be non-negative");
  AuditReport report;
  report.tol = tol;
  report.checks[0].name = "energy_envelope";
  report.checks[1].name = "perturbed_energy_envelope";
  report.checks[2].name = "differential_inequality";
  report.checks[3].name = "perturbation_bound";
  if (records.empty()) return report;

  const double E0 = records.front().E;
  const double H0 = records.front().H;
  const double t0 = records.front().t;
  const double scale = E0 > 0.0 ? E0 : 1.0;

  for (std::size_t n = 0; n < records.size(); ++n) {
    const EnergyRecord& rec = records[n];
    const double decay = std::exp(-cert.r * (rec.t - t0));
    note(report.checks[0], (rec.E - cert.prefactor * H0 * decay * (1.0 + tol)) / scale, n, rec.t);
    note(report.checks[1], (rec.H - H0 * decay * (1.0 + tol)) / scale, n, rec.t);
    note(report.checks[3], (std::abs(rec.H - rec.E) - cert.eps * cert.kappa * rec.E * (1.0 + tol)) / scale,
         n, rec.t);
    if (n + 1 < records.size()) {
      const EnergyRecord& next = records[n + 1];
      const double dt = next.t - rec.t;
      if (!(dt > 0.0)) throw Error("verify_trajectory: record times must increase strictly");
      const double lhs = (next.H - rec.H) / dt;
      const double rhs = -cert.eps * 0.5 * (rec.E + next.E) + tol * E0 * cert.r;
      note(report.checks[2], (lhs - rhs) / scale, n + 1, next.t);
    }
  }
  if (records.size() < 2) report.checks[2].worst_margin = 0.0;
  return report;
}

AuditReport verify_trajectory(const Trajectory& traj, const Certificate& cert, double tol) {
  if (!cert.provenance.empty() && cert.provenance != traj.provenance) {
    throw ProvenanceError("verify_trajectory: certificate and trajectory come from different problems");
  }
  if (!traj.eps || *traj.eps != cert.eps) {
    throw ProvenanceError("verify_trajectory: trajectory H column was not produced with the certificate's eps");
  }
  return verify_trajectory(std::span<const EnergyRecord>(traj.records), cert, tol);
}

}  // namespace beamdecay
