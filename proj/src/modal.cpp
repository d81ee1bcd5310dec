#include "beamdecay/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamdecay/error.hpp"
#include "beamdecay/operators.hpp"

namespace beamdecay {

DampingRegime classify_regime(double mu, double a) {
  const double disc = a * a - mu;
  if (disc == 0.0 || std::abs(disc) <= 1e-12 * std::max(a * a, mu)) return DampingRegime::critical;
  return disc < 0.0 ? DampingRegime::underdamped : DampingRegime::overdamped;
}

OscillatorValue damped_oscillator(double mu, double a, double q0, double qd0, double fk, double t) {
  if (!(mu > 0.0)) throw Error("damped_oscillator: mu must be positive");
  const double particular = fk / mu;
  const double y0 = q0 - particular;
  const double yd0 = qd0;
  OscillatorValue out;
  switch (classify_regime(mu, a)) {
    case DampingRegime::underdamped: {
      const double w = std::sqrt(mu - a * a);
      const double e = std::exp(-a * t);
      const double c = std::cos(w * t);
      const double s = std::sin(w * t);
      out.q = e * (y0 * c + (yd0 + a * y0) / w * s);
      out.qdot = e * (yd0 * c - (a * yd0 + mu * y0) / w * s);
      break;
    }
    case DampingRegime::critical: {
      const double e = std::exp(-a * t);
      const double b = yd0 + a * y0;
      out.q = e * (y0 + b * t);
      out.qdot = e * (yd0 - a * b * t);
      break;
    }
    case DampingRegime::overdamped: {
      const double s = std::sqrt(a * a - mu);
      const double r1 = -mu / (a + s);
      const double r2 = -a - s;
      const double c1 = (yd0 - r2 * y0) / (r1 - r2);
      const double c2 = (r1 * y0 - yd0) / (r1 - r2);
      const double e1 = std::exp(r1 * t);
      const double e2 = std::exp(r2 * t);
      out.q = c1 * e1 + c2 * e2;
      out.qdot = c1 * r1 * e1 + c2 * r2 * e2;
      break;
    }
  }
  out.q += particular;
  return out;
}

ModalSolution::ModalSolution(const InitialData& init, double a, const Grid& grid,
                             const ForcingSpec& forcing, EigenvalueModel model) {
  if (forcing.kind == ForcingKind::time_dependent) {
    throw Error("modal oracle: forcing must be zero or static");
  }
  const std::size_t n = grid.interior_size();
  if (init.u0.size() != n || init.u1.size() != n) throw Error("modal oracle: length mismatch");
  const Vector q0 = dst(init.u0);
  const Vector qd0 = dst(init.u1);
  const Vector fk = forcing.kind == ForcingKind::zero ? Vector(n, 0.0) : dst(forcing.values);
  modes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ModeData& md = modes_[i];
    md.k = static_cast<int>(i + 1);
    md.mu = model == EigenvalueModel::discrete
                ? biharmonic_eigenvalue(grid, md.k)
                : std::pow(md.k * std::numbers::pi / grid.length(), 4);
    md.damping = a;
    md.regime = classify_regime(md.mu, a);
    md.omega = md.regime == DampingRegime::critical ? 0.0 : std::sqrt(std::abs(md.mu - a * a));
    md.q0 = q0[i];
    md.qd0 = qd0[i];
    md.fk = fk[i];
  }
}

ModalSolution ModalSolution::from_problem(const ValidatedProblem& problem, EigenvalueModel model) {
  const DampingSpec& d = problem.damping();
  if (d.form != DampingForm::canonical || d.m != 2.0) {
    throw Error("modal oracle: requires canonical damping with m = 2");
  }
  if (problem.restoring().kind != RestoringKind::zero) throw Error("modal oracle: requires G = 0");
  return ModalSolution(problem.initial(), d.a, problem.grid(), problem.forcing(), model);
}

State ModalSolution::evaluate(double t) const {
  Vector q(modes_.size());
  Vector qd(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const ModeData& md = modes_[i];
    if (md.q0 == 0.0 && md.qd0 == 0.0 && md.fk == 0.0) {
      q[i] = qd[i] = 0.0;
      continue;
    }
    const OscillatorValue ov = damped_oscillator(md.mu, md.damping, md.q0, md.qd0, md.fk, t);
    q[i] = ov.q;
    qd[i] = ov.qdot;
  }
  return State{t, idst(q), idst(qd)};
}

State modal_solution(const InitialData& init, double a, const Grid& grid, const ForcingSpec& f,
                     double t) {
  return ModalSolution(init, a, grid, f).evaluate(t);
}

OracleComparison oracle_compare(const Trajectory& traj, const ModalSolution& oracle,
                                const Grid& grid, const BandedOperator& op) {
  if (traj.states.empty()) throw Error("oracle_compare: trajectory must keep its states");
  OracleComparison out;
  const double h = grid.spacing();
  Vector diff(grid.interior_size());
  for (const State& s : traj.states) {
    const State ref = oracle.evaluate(s.t);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.u[i] - ref.u[i];
    out.max_l2_error = std::max(out.max_l2_error, std::sqrt(inner_product(diff, diff, h)));
    out.max_h2star_error = std::max(out.max_h2star_error, std::sqrt(op.quadratic_form(diff)));
  }
  return out;
}

double observed_order(double coarse_error, double fine_error, double ratio) {
  return std::log(coarse_error / fine_error) / std::log(ratio);
}

std::vector<ConvergenceRow> dt_convergence(const ValidatedProblem& problem, int halvings) {
  if (halvings < 0) throw Error("dt_convergence: halvings must be non-negative");
  const ModalSolution oracle = ModalSolution::from_problem(problem);
  std::vector<ConvergenceRow> rows;
  SimConfig cfg = problem.config();
  for (int j = 0; j <= halvings; ++j) {
    SimConfig run = cfg;
    const int factor = 1 << j;
    run.dt = cfg.dt / factor;
    run.output_stride = cfg.output_stride * factor;
    const Trajectory traj = simulate(problem, run);
    ConvergenceRow row;
    row.dt = run.dt;
    row.errors = oracle_compare(traj, oracle, problem.grid(), problem.op());
    if (!rows.empty()) {
      row.order = observed_order(rows.back().errors.max_l2_error, row.errors.max_l2_error);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace beamdecay
