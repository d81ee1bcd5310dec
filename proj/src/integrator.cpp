#include "beamdecay/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamdecay/error.hpp"
#include "beamdecay/nonlinearity.hpp"

namespace beamdecay {

namespace {

double l2(std::span<const double> x, double h) { return std::sqrt(inner_product(x, x, h)); }

bool finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

struct MidpointResidual {
  Vector rho;
  Vector u_mid;
  double norm = 0.0;
};

MidpointResidual midpoint_residual(const State& s, const ValidatedProblem& p, double dt,
                                   std::span<const double> w, std::span<const double> f_mid) {
  const std::size_t n = w.size();
  MidpointResidual r;
  r.u_mid.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.u_mid[i] = s.u[i] + 0.5 * dt * w[i];
  const Vector au = p.op().apply(std::span<const double>(r.u_mid));
  r.rho.resize(n);
  const DampingSpec& damp = p.damping();
  const RestoringSpec& rest = p.restoring();
  for (std::size_t i = 0; i < n; ++i) {
    const double force = au[i] + damping_eval(damp, w[i]) + restoring_eval(rest, r.u_mid[i]) - f_mid[i];
    r.rho[i] = w[i] - s.v[i] + 0.5 * dt * force;
  }
  r.norm = l2(r.rho, p.grid().spacing());
  return r;
}

}  // namespace

BandedMatrix<double> step_jacobian(const ValidatedProblem& problem, double dt,
                                   std::span<const double> w, std::span<const double> u_mid) {
  BandedMatrix<double> j = problem.op().to_banded(0.25 * dt * dt);
  for (std::size_t i = 0; i < w.size(); ++i) {
    j(i, i) += 1.0 + 0.5 * dt * damping_derivative(problem.damping(), w[i]) +
               0.25 * dt * dt * restoring_derivative(problem.restoring(), u_mid[i]);
  }
  return j;
}

StepResult step(const State& state, const ValidatedProblem& problem, double dt) {
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  const std::size_t n = problem.grid().interior_size();
  if (state.u.size() != n || state.v.size() != n) throw Error("step: state length mismatch");

  const SimConfig& cfg = problem.config();
  const Vector f_mid = problem.forcing().at(state.t + 0.5 * dt, n);

  Vector w = state.v;
  StepResult out;
  MidpointResidual r = midpoint_residual(state, problem, dt, w, f_mid);
  int iter = 0;
  while (!(r.norm < cfg.newton_tol)) {
    if (!std::isfinite(r.norm)) {
      throw SolverError("step: non-finite Newton residual", std::nullopt, r.norm);
    }
    if (iter == cfg.newton_max_iter) {
      throw SolverError("step: Newton did not converge in " + std::to_string(iter) +
                            " iterations (residual " + std::to_string(r.norm) + ")",
                        std::nullopt, r.norm);
    }
    BandedMatrix<double> jac = step_jacobian(problem, dt, w, r.u_mid);
    for (double& x : r.rho) x = -x;
    const Vector delta = banded_solve(std::move(jac), std::span<const double>(r.rho));
    for (std::size_t i = 0; i < n; ++i) w[i] += delta[i];
    ++iter;
    r = midpoint_residual(state, problem, dt, w, f_mid);
  }

  out.state.t = state.t + dt;
  out.state.u.resize(n);
  out.state.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.state.u[i] = state.u[i] + dt * w[i];
    out.state.v[i] = 2.0 * w[i] - state.v[i];
  }
  if (!finite(out.state.u) || !finite(out.state.v)) {
    throw SolverError("step: non-finite state", std::nullopt, r.norm);
  }
  out.newton_iterations = iter;
  out.residual = r.norm;
  out.midpoint_dissipation = dissipation(w, problem.damping(), problem.grid().spacing());
  return out;
}

Trajectory simulate(const ValidatedProblem& problem, const SimulateOptions& options) {
  const SimConfig& cfg = problem.config();
  const double ratio = cfg.T / cfg.dt;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.eps = options.eps;
  traj.provenance = problem.provenance();

  State s{0.0, problem.initial().u0, problem.initial().u1};
  traj.records.push_back(make_record(s, problem, options.eps));
  if (options.keep_states) traj.states.push_back(s);

  double work = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_next = k + 1 == steps ? cfg.T : static_cast<double>(k + 1) * cfg.dt;
    const double dt = t_next - s.t;
    StepResult r;
    try {
      r = step(s, problem, dt);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at step " + std::to_string(k + 1), k + 1,
                        e.last_residual());
    }
    r.state.t = t_next;
    s = std::move(r.state);
    work += dt * r.midpoint_dissipation;

    ++traj.stats.steps;
    traj.stats.total_newton_iterations += static_cast<std::size_t>(r.newton_iterations);
    traj.stats.max_newton_iterations = std::max(traj.stats.max_newton_iterations, r.newton_iterations);
    traj.stats.max_residual = std::max(traj.stats.max_residual, r.residual);

    const bool last = k + 1 == steps;
    if (last || (k + 1) % static_cast<std::size_t>(cfg.output_stride) == 0) {
      EnergyRecord rec = make_record(s, problem, options.eps);
      rec.newton_iters = r.newton_iterations;
      rec.work = work;
      work = 0.0;
      traj.records.push_back(rec);
      if (options.keep_states) traj.states.push_back(s);
    }
  }
  return traj;
}

Trajectory simulate(const ValidatedProblem& problem, const SimConfig& cfg,
                    const SimulateOptions& options) {
  return simulate(with_config(problem, cfg), options);
}

}  // namespace beamdecay
