// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "beamdecay/banded.hpp"
#include "beamdecay/certificate.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/modal.hpp"
#include "beamdecay/nonlinearity.hpp"
#include "beamdecay/stationary.hpp"
#include "problems.hpp"

using namespace beamdecay;
using beamdecay::testing::Instance;
using beamdecay::testing::sine_problem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

char buf[512];

template <class... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Run {
  Instance in;
  Certificate cert;
  Trajectory traj;
};

// Shared by criteria 1, 2 and 5.
const std::vector<Run>& monotonicity_runs() {
  static const std::vector<Run> runs = [] {
    std::vector<Run> out;
    for (double m : {2.0, 3.0, 4.0}) {
      for (double a : {0.05, 0.5}) {
        Instance in;
        in.m = m;
        in.a = a;
        const ValidatedProblem p = sine_problem(in);
        Certificate c = compute_certificate(p);
        Trajectory t = simulate(p, SimulateOptions{c.eps, false});
        out.push_back({in, std::move(c), std::move(t)});
      }
    }
    return out;
  }();
  return runs;
}

Outcome energy_monotonicity() {
  Outcome o;
  double worst = -INFINITY;
  for (const Run& r : monotonicity_runs()) {
    const auto& rec = r.traj.records;
    for (std::size_t n = 1; n < rec.size(); ++n) {
      const double excess = rec[n].E - rec[n - 1].E;
      worst = std::max(worst, excess);
      if (excess > 10.0 * r.in.newton_tol) o.passed = false;
    }
  }
  o.detail = fmt("6 runs, max E_{n+1} - E_n = %.3e (limit %.1e)", worst, 1e-9);
  return o;
}

Outcome dissipation_identity() {
  Outcome o;
  double worst = 0.0;
  for (const Run& r : monotonicity_runs()) {
    const auto& rec = r.traj.records;
    for (std::size_t n = 1; n < rec.size(); ++n) {
      const double defect = std::abs(rec[n].E - rec[n - 1].E + rec[n].work);
      worst = std::max(worst, defect);
      if (defect > 10.0 * r.in.newton_tol) o.passed = false;
    }
  }
  o.detail = fmt("max |E_{n+1} - E_n + dt (F(w), w)_h| = %.3e (limit %.1e)", worst, 1e-9);
  return o;
}

Outcome oracle_equivalence() {
  const std::vector<ConvergenceRow> rows = dt_convergence(sine_problem(Instance{}), 1);
  const double err = rows[0].errors.max_l2_error;
  const double order = *rows[1].order;
  Outcome o;
  o.passed = err < 1e-6 && order >= 1.9 && order <= 2.1;
  o.detail = fmt("max l2 error %.3e at dt = 1e-3 (limit 1e-6), dt-order %.4f", err, order);
  return o;
}

Outcome certificate_soundness() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int chain_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = 0.01 + 2.0 * U(rng);
    const double a2 = a1 * (1.0 + 3.0 * U(rng));
    const double m = 2.0 + 4.0 * U(rng);
    const double B = 0.2 + 5.0 * U(rng);
    const double k_inf = 0.1 + 2.0 * U(rng);
    const double E0 = std::exp(-5.0 + 10.0 * U(rng));
    const Certificate c = compute_certificate(CertificateInputs{a1, a2, m, B, k_inf, E0});
    const double B2 = B * B;
    const bool ok = a2 * c.gamma * c.delta * B2 <= 0.25 && a2 * c.c_delta * c.eps <= a1 &&
                    (1.5 + a2 * a2 * B2) * c.eps <= a1 && c.eps * c.kappa <= 0.5;
    if (!ok) ++chain_failures;
  }
  int young_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double m = 2.0 + 4.0 * U(rng);
    const double delta = std::exp(-3.0 + 6.0 * U(rng));
    const double c = young_conjugate_constant(m, delta);
    const double X = 10.0 * U(rng);
    const double Y = 10.0 * U(rng);
    if (X * Y > delta * std::pow(X, m) + c * std::pow(Y, m / (m - 1.0))) ++young_failures;
  }
  o.passed = chain_failures == 0 && young_failures == 0;
  o.detail = fmt("chain violations %d/100, Young violations %d/1000", chain_failures, young_failures);
  return o;
}

Outcome certified_envelope() {
  Outcome o;
  double min_slack = INFINITY;
  for (const Run& r : monotonicity_runs()) {
    const AuditReport rep = verify_trajectory(r.traj, r.cert, 0.05);
    std::vector<double> t, e;
    for (const EnergyRecord& rec : r.traj.records) {
      t.push_back(rec.t);
      e.push_back(rec.E);
    }
    const double fitted = fit_decay_rate(t, e).rate;
    min_slack = std::min(min_slack, fitted - r.cert.r);
    if (!rep.passed() || fitted < r.cert.r) o.passed = false;
  }
  // Worked linear case.
  const ValidatedProblem p = sine_problem(Instance{});
  const Certificate c = compute_certificate(p);
  const Trajectory traj = simulate(p, SimulateOptions{c.eps, false});
  std::vector<double> t, e;
  for (const EnergyRecord& rec : traj.records) {
    t.push_back(rec.t);
    e.push_back(rec.E);
  }
  const double fitted = fit_decay_rate(t, e).rate;
  const bool worked = verify_trajectory(traj, c, 0.05).passed() && std::abs(c.r - 0.0621) < 5e-5 &&
                      std::abs(fitted / 0.2 - 1.0) <= 0.05;
  o.passed = o.passed && worked;
  o.detail = fmt("6 audits, min(r_fitted - r_certified) = %.4f; worked case r_certified %.6f, r_fitted %.5f",
                 min_slack, c.r, fitted);
  return o;
}

Outcome poincare_and_power() {
  Outcome o;
  const Grid g(BeamDomain{0.0, std::numbers::pi}, 64);
  const BandedOperator op(g);
  const DiscreteConstants k = discrete_constants(g);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Vector v(g.interior_size());
    if (trial % 2 == 0) {
      for (double& x : v) x = U(rng);
    } else {
      for (int mode = 1; mode <= 6; ++mode) {
        const Vector s = g.sine_mode(mode, U(rng) / mode);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += s[i];
      }
    }
    const double M = 0.1 + 4.0 * (U(rng) + 1.0) / 2.0;
    const double m = 2.0 + 3.0 * (U(rng) + 1.0) / 2.0;
    const double sup = norms(v, g, op).sup;
    for (double& x : v) x *= M / sup;
    const FieldNorms n = norms(v, g, op, m);
    const double gamma = power_bound_gamma(M, m).gamma;
    if (!(n.l2 <= k.B * n.h2star)) ++failures;
    if (!(std::pow(n.lm, m) <= gamma * n.l2 * n.l2)) ++failures;
  }
  const FieldNorms s = norms(g.sine_mode(1), g, op);
  const double gap = std::abs(s.l2 - k.B * s.h2star) / s.l2;
  o.passed = failures == 0 && gap <= 1e-10;
  o.detail = fmt("violations %d/400, first-mode Poincare gap %.2e (limit 1e-10)", failures, gap);
  return o;
}

Outcome stationary_limit() {
  const Grid g(BeamDomain{0.0, std::numbers::pi}, 64);
  const Vector z(g.interior_size(), 0.0);
  SimConfig cfg;
  cfg.T = 60.0;
  cfg.output_stride = 10;
  const ValidatedProblem p = validate_problem(g.domain(), g, DampingSpec::canonical(2.0, 0.1),
                                              RestoringSpec::zero(), ForcingSpec::static_profile(g.sine_mode(1)),
                                              InitialData{z, z}, cfg);
  const StationarySolution sol = solve_stationary(p, cfg.newton_tol);
  const ValidatedProblem w = shifted_problem(p, sol);
  const Certificate cert = compute_certificate(w);
  const Trajectory traj = simulate(p);
  const Trajectory wtraj = simulate(w, SimulateOptions{cert.eps, true});
  const CorollaryReport rep = corollary_check(traj, sol, cert, p.op());
  const double shift = max_shift_deviation(traj, wtraj, sol);
  Outcome o;
  o.passed = rep.rates_dominate() && rep.envelopes_hold() && shift <= 10.0 * cfg.newton_tol;
  o.detail = fmt("rates %.4f (H2*) and %.4f (l2 of u') vs certified %.4f, shift deviation %.2e (limit %.0e)",
                 rep.diff_rate.rate, rep.velocity_rate.rate, cert.r, shift, 10.0 * cfg.newton_tol);
  return o;
}

Outcome stationary_solver() {
  const Grid g(BeamDomain{0.0, std::numbers::pi}, 64);
  const Vector z(g.interior_size(), 0.0);
  auto make = [&](const RestoringSpec& r, const Vector& f) {
    return validate_problem(g.domain(), g, DampingSpec::canonical(2.0, 0.1), r,
                            ForcingSpec::static_profile(f), InitialData{z, z}, SimConfig{});
  };
  const StationarySolution cubic = solve_stationary(make(RestoringSpec::odd_power(1.0, 3), g.sine_mode(1)), 1e-10);
  const auto& r = cubic.residual_history;
  double order = NAN;
  if (r.size() >= 4) {
    const std::size_t k = r.size() - 2;
    order = std::log(r[k] / r[k - 1]) / std::log(r[k - 1] / r[k - 2]);
  }

  Vector f(g.interior_size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-std::pow(g.node(i) - 1.0, 2)) - 0.3;
  const ValidatedProblem lin = make(RestoringSpec::zero(), f);
  const StationarySolution ls = solve_stationary(lin, 1e-10);
  const ExtendedVector fe(f.begin(), f.end());
  const ExtendedVector direct = banded_solve(lin.op().to_banded<long double>(), std::span<const long double>(fe));
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += (ls.u_hat_extended[i] - direct[i]) * (ls.u_hat_extended[i] - direct[i]);
    den += direct[i] * direct[i];
  }
  const double rel = static_cast<double>(std::sqrt(num / den));
  // Independent reference: divide the sine coefficients by mu_k.
  Vector coeff = dst(f);
  for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] /= biharmonic_eigenvalue(g, static_cast<int>(k + 1));
  const Vector modal = idst(coeff);
  double mn = 0.0, md = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mn += std::pow(ls.u_hat[i] - modal[i], 2);
    md += modal[i] * modal[i];
  }
  const double rel_modal = std::sqrt(mn / md);

  Outcome o;
  o.passed = cubic.residual_norm < 1e-10 && cubic.newton_iterations <= 8 && order >= 1.8 && rel <= 1e-12 &&
             rel_modal <= 1e-12;
  o.detail = fmt("cubic: residual %.2e after %d iterations, tail order %.2f; linear rel. diff %.2e (banded), %.2e (modal)",
                 cubic.residual_norm, cubic.newton_iterations, order, rel, rel_modal);
  return o;
}

Outcome spatial_convergence() {
  std::vector<double> errs;
  for (int N : {32, 64, 128}) {
    Instance in;
    in.N = N;
    in.T = 1.0;
    in.dt = 1e-4;
    in.stride = 10000;
    const ValidatedProblem p = sine_problem(in);
    const Trajectory traj = simulate(p);
    const State ref = ModalSolution::from_problem(p, EigenvalueModel::continuum).evaluate(traj.states.back().t);
    Vector d(ref.u.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = traj.states.back().u[i] - ref.u[i];
    errs.push_back(std::sqrt(p.op().quadratic_form(d)));
  }
  const double o1 = observed_order(errs[0], errs[1]);
  const double o2 = observed_order(errs[1], errs[2]);
  Outcome o;
  o.passed = o1 >= 1.9 && o1 <= 2.1 && o2 >= 1.9 && o2 <= 2.1;
  o.detail = fmt("H2* errors %.3e, %.3e, %.3e; h-orders %.4f, %.4f", errs[0], errs[1], errs[2], o1, o2);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"energy monotonicity", energy_monotonicity},
      {"discrete dissipation identity", dissipation_identity},
      {"linear oracle equivalence", oracle_equivalence},
      {"certificate soundness", certificate_soundness},
      {"certified envelope", certified_envelope},
      {"Poincare and sup-bounded power inequalities", poincare_and_power},
      {"convergence to the stationary state", stationary_limit},
      {"stationary solver", stationary_solver},
      {"spatial convergence", spatial_convergence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
