#pragma once

// Closed-form solution of the linear beam u'' + 2a u' + A u = f (the m = 2
// member of the canonical damping family, G = 0, static or zero f).
//
// Each sine mode q_k obeys q'' + 2a q' + mu_k q = f_k. With mu_k the discrete
// eigenvalues the oracle solves the semi-discrete system exactly in time;
// with the continuum values (k pi / L)^4 it is the exact PDE solution
// sampled at the nodes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "beamdecay/domain.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/state.hpp"

namespace beamdecay {

enum class DampingRegime { underdamped, critical, overdamped };
enum class EigenvalueModel { discrete, continuum };

struct ModeData {
  int k = 0;
  double mu = 0.0;
  double damping = 0.0;  ///< a in q'' + 2 a q' + mu q
  DampingRegime regime = DampingRegime::underdamped;
  double omega = 0.0;    ///< sqrt(|mu - a^2|); zero when critical
  double q0 = 0.0;
  double qd0 = 0.0;
  double fk = 0.0;
};

struct OscillatorValue {
  double q = 0.0;
  double qdot = 0.0;
};

DampingRegime classify_regime(double mu, double a);

/// Exact solution of q'' + 2 a q' + mu q = fk with q(0) = q0, q'(0) = qd0.
OscillatorValue damped_oscillator(double mu, double a, double q0, double qd0, double fk, double t);

class ModalSolution {
 public:
  /// Throws Error when the forcing is time-dependent.
  ModalSolution(const InitialData& init, double a, const Grid& grid, const ForcingSpec& forcing,
                EigenvalueModel model = EigenvalueModel::discrete);

  /// Throws Error unless the problem is canonical with m = 2 and G = 0.
  static ModalSolution from_problem(const ValidatedProblem& problem,
                                    EigenvalueModel model = EigenvalueModel::discrete);

  State evaluate(double t) const;
  std::span<const ModeData> modes() const noexcept { return modes_; }

 private:
  std::vector<ModeData> modes_;
};

/// Single evaluation of the discrete-eigenvalue oracle.
State modal_solution(const InitialData& init, double a, const Grid& grid, const ForcingSpec& f,
                     double t);

struct OracleComparison {
  double max_l2_error = 0.0;
  double max_h2star_error = 0.0;
};

/// Pointwise-in-time errors between recorded states and the oracle.
OracleComparison oracle_compare(const Trajectory& traj, const ModalSolution& oracle,
                                const Grid& grid, const BandedOperator& op);

/// log2(coarse / fine) for a step ratio of 2.
double observed_order(double coarse_error, double fine_error, double ratio = 2.0);

struct ConvergenceRow {
  double dt = 0.0;
  OracleComparison errors;
  std::optional<double> order;  ///< from the previous (coarser) row
};

/// Runs the problem at dt, dt/2, ..., dt/2^halvings and compares each run to
/// the discrete-eigenvalue oracle. Throws Error for non-linear problems.
std::vector<ConvergenceRow> dt_convergence(const ValidatedProblem& problem, int halvings);

}  // namespace beamdecay
