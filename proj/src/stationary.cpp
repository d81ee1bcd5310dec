#include "beamdecay/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "beamdecay/banded.hpp"
#include "beamdecay/error.hpp"
#include "beamdecay/nonlinearity.hpp"

namespace beamdecay {

namespace {

using Ext = long double;

Ext restoring_ext(const RestoringSpec& g, Ext u) {
  switch (g.kind) {
    case RestoringKind::zero:
      return 0.0L;
    case RestoringKind::odd_power: {
      Ext p = 1.0L;
      for (int k = 0; k < g.power; ++k) p *= u;
      return static_cast<Ext>(g.lambda) * p;
    }
    case RestoringKind::custom:
      return g.custom_value(static_cast<double>(u));
  }
  return 0.0L;
}

Ext restoring_slope_ext(const RestoringSpec& g, Ext u) {
  switch (g.kind) {
    case RestoringKind::zero:
      return 0.0L;
    case RestoringKind::odd_power: {
      Ext p = 1.0L;
      for (int k = 0; k + 1 < g.power; ++k) p *= u;
      return static_cast<Ext>(g.lambda) * g.power * p;
    }
    case RestoringKind::custom:
      return g.custom_slope(static_cast<double>(u));
  }
  return 0.0L;
}

ExtendedVector forcing_ext(const ValidatedProblem& p) {
  const Vector f = p.forcing().at(0.0, p.grid().interior_size());
  return ExtendedVector(f.begin(), f.end());
}

ExtendedVector residual(const ValidatedProblem& p, std::span<const Ext> u, const ExtendedVector& f) {
  ExtendedVector r = p.op().apply(u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += restoring_ext(p.restoring(), u[i]) - f[i];
  return r;
}

double l2_ext(std::span<const Ext> r, double h) {
  Ext acc = 0.0L;
  for (Ext x : r) acc += x * x;
  return static_cast<double>(std::sqrt(static_cast<Ext>(h) * acc));
}

void require_static(const ValidatedProblem& p) {
  if (p.forcing().kind == ForcingKind::time_dependent) {
    throw Error("stationary: forcing must be zero or static");
  }
}

}  // namespace

double stationary_residual_norm(const ValidatedProblem& problem, std::span<const long double> u) {
  require_static(problem);
  if (u.size() != problem.grid().interior_size()) throw Error("stationary: length mismatch");
  const ExtendedVector r = residual(problem, u, forcing_ext(problem));
  return l2_ext(r, problem.grid().spacing());
}

StationarySolution solve_stationary(const ValidatedProblem& problem, double tol,
                                    std::optional<Vector> initial_guess) {
  require_static(problem);
  if (!(tol > 0.0)) throw Error("stationary: tol must be positive");
  const std::size_t n = problem.grid().interior_size();
  const double h = problem.grid().spacing();
  const ExtendedVector f = forcing_ext(problem);
  const BandedMatrix<Ext> a = problem.op().to_banded<Ext>();

  ExtendedVector u;
  if (initial_guess) {
    if (initial_guess->size() != n) throw Error("stationary: initial guess length mismatch");
    u.assign(initial_guess->begin(), initial_guess->end());
  } else {
    u = banded_solve(a, std::span<const Ext>(f));
  }

  StationarySolution sol;
  sol.provenance = problem.provenance();
  const int max_iter = std::max(problem.config().newton_max_iter, 1);
  int iter = 0;
  for (;;) {
    ExtendedVector r = residual(problem, u, f);
    const double norm = l2_ext(r, h);
    sol.residual_history.push_back(norm);
    if (!std::isfinite(norm)) throw SolverError("stationary: non-finite residual", std::nullopt, norm);
    if (norm < tol) break;
    if (iter == max_iter) {
      throw SolverError("stationary: Newton did not converge in " + std::to_string(iter) +
                            " iterations (residual " + std::to_string(norm) + ")",
                        std::nullopt, norm);
    }
    BandedMatrix<Ext> jac = a;
    for (std::size_t i = 0; i < n; ++i) jac(i, i) += restoring_slope_ext(problem.restoring(), u[i]);
    for (Ext& x : r) x = -x;
    const ExtendedVector delta = banded_solve(std::move(jac), std::span<const Ext>(r));
    for (std::size_t i = 0; i < n; ++i) u[i] += delta[i];
    ++iter;
  }

  sol.newton_iterations = iter;
  sol.residual_norm = sol.residual_history.back();
  sol.u_hat.assign(u.begin(), u.end());
  sol.u_hat_extended = std::move(u);
  return sol;
}

ValidatedProblem shifted_problem(const ValidatedProblem& problem, const StationarySolution& solution) {
  if (problem.restoring().kind != RestoringKind::zero) {
    throw Error("shifted_problem: the shift u - u_hat is exact only for G = 0");
  }
  if (solution.provenance != problem.provenance()) {
    throw ProvenanceError("shifted_problem: stationary solution belongs to a different problem");
  }
  InitialData init = problem.initial();
  for (std::size_t i = 0; i < init.u0.size(); ++i) init.u0[i] -= solution.u_hat[i];
  return with_initial_data(with_forcing(problem, ForcingSpec::zero()), std::move(init));
}

CorollaryReport corollary_check(const Trajectory& traj, const StationarySolution& solution,
                                const Certificate& cert, const BandedOperator& op, double tol) {
  if (traj.provenance != solution.provenance) {
    throw ProvenanceError("corollary_check: trajectory and stationary solution come from different problems");
  }
  if (traj.states.size() != traj.records.size() || traj.states.empty()) {
    throw Error("corollary_check: trajectory must keep its states");
  }
  const double h = op.spacing();
  const std::size_t n = solution.u_hat.size();

  CorollaryReport rep;
  rep.certified_rate = cert.r;
  rep.rows.reserve(traj.states.size());
  rep.shifted_records.reserve(traj.states.size());
  Vector diff(n);
  for (const State& s : traj.states) {
    if (s.u.size() != n) throw ProvenanceError("corollary_check: state length mismatch");
    for (std::size_t i = 0; i < n; ++i) diff[i] = s.u[i] - solution.u_hat[i];
    const double q = op.quadratic_form(diff);
    const double vv = inner_product(s.v, s.v, h);
    CorollaryRow row{s.t, std::sqrt(q), std::sqrt(vv)};
    rep.rows.push_back(row);
    EnergyRecord rec;
    rec.t = s.t;
    rec.E = 0.5 * vv + 0.5 * q;
    rec.H = rec.E + cert.eps * inner_product(diff, s.v, h);
    rec.h2star_u = row.h2star_diff;
    rec.l2_v = row.l2_v;
    rep.shifted_records.push_back(rec);
  }

  const double Ew0 = rep.shifted_records.front().E;
  if (std::abs(cert.E0 - Ew0) > 1e-9 * std::max(1.0, Ew0)) {
    throw ProvenanceError("corollary_check: certificate was not computed for the shifted initial data");
  }
  rep.energy_audit = verify_trajectory(std::span<const EnergyRecord>(rep.shifted_records), cert, tol);

  const double Hw0 = rep.shifted_records.front().H;
  const double env0 = std::sqrt(2.0 * cert.prefactor * std::max(Hw0, 0.0));
  const double scale = env0 > 0.0 ? env0 : 1.0;
  for (const CorollaryRow& row : rep.rows) {
    const double env = env0 * std::exp(-0.5 * cert.r * row.t) * (1.0 + tol);
    rep.diff_envelope_margin = std::max(rep.diff_envelope_margin, (row.h2star_diff - env) / scale);
    rep.velocity_envelope_margin = std::max(rep.velocity_envelope_margin, (row.l2_v - env) / scale);
  }

  std::vector<double> t;
  std::vector<double> d;
  std::vector<double> v;
  for (const CorollaryRow& row : rep.rows) {
    t.push_back(row.t);
    d.push_back(row.h2star_diff);
    v.push_back(row.l2_v);
  }
  const FitWindow window{0.5 * t.back(), t.back()};
  rep.diff_rate = fit_envelope_decay_rate(t, d, window);
  rep.velocity_rate = fit_envelope_decay_rate(t, v, window);
  return rep;
}

double max_shift_deviation(const Trajectory& original, const Trajectory& shifted,
                           const StationarySolution& solution) {
  if (original.states.size() != shifted.states.size()) {
    throw Error("max_shift_deviation: trajectories have different lengths");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < original.states.size(); ++k) {
    const State& a = original.states[k];
    const State& b = shifted.states[k];
    if (a.t != b.t) throw Error("max_shift_deviation: record times differ");
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      worst = std::max(worst, std::abs(a.u[i] - (b.u[i] + solution.u_hat[i])));
      worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    }
  }
  return worst;
}

}  // namespace beamdecay
