#pragma once

// Implicit midpoint time stepping of u'' + A u + F(u') + G(u) = f.
//
// With w the midpoint velocity, one step is
//   u+ = u + dt w,   v+ = 2 w - v,
//   w = v + dt/2 (-A (u + dt/2 w) - F(w) - G(u + dt/2 w) + f(t + dt/2)),
// solved by Newton from w = v. For G = 0 and f = 0 the scheme satisfies
// E+ - E = -dt (F(w), w)_h up to the Newton residual.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamdecay/banded.hpp"
#include "beamdecay/domain.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/state.hpp"

namespace beamdecay {

struct StepResult {
  State state;
  int newton_iterations = 0;
  double residual = 0.0;         ///< l2 norm of the final midpoint-equation residual
  double midpoint_dissipation = 0.0;  ///< (F(w), w)_h
};

/// One implicit midpoint step of length dt. Throws SolverError when Newton
/// does not reach problem.config().newton_tol or values become non-finite.
StepResult step(const State& state, const ValidatedProblem& problem, double dt);

struct SolverStats {
  std::size_t steps = 0;
  std::size_t total_newton_iterations = 0;
  int max_newton_iterations = 0;
  double max_residual = 0.0;
};

struct Trajectory {
  std::vector<State> states;
  std::vector<EnergyRecord> records;
  SolverStats stats;
  double dt = 0.0;
  std::optional<double> eps;  ///< perturbation used for the H column
  std::string provenance;     ///< ValidatedProblem::provenance() of the source problem
};

struct SimulateOptions {
  /// When set, records carry H = E + eps (u, v)_h.
  std::optional<double> eps;
  /// Keep every recorded State (needed by the stationary and oracle checks).
  bool keep_states = true;
};

/// Runs from t = 0 to T with the problem's SimConfig, recording the initial
/// state, every output_stride-th step and the final state. Step failures
/// are rethrown as SolverError carrying the step index.
Trajectory simulate(const ValidatedProblem& problem, const SimulateOptions& options = {});
Trajectory simulate(const ValidatedProblem& problem, const SimConfig& cfg,
                    const SimulateOptions& options = {});

/// Linear system of one Newton iteration:
///   I + (dt^2/4) A + (dt/2) diag(F'(w)) + (dt^2/4) diag(G'(u_mid)).
BandedMatrix<double> step_jacobian(const ValidatedProblem& problem, double dt,
                                   std::span<const double> w, std::span<const double> u_mid);

}  // namespace beamdecay
