#pragma once

// Stationary problem A u + G(u) = f with hinged ends, and the check that a
// dynamic run with static forcing settles onto it.
//
// The Newton iteration runs in extended precision (long double): at N = 64
// the condition number of A is ~3e6, so the residual of any double-precision
// vector cannot drop much below 1e-10.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamdecay/certificate.hpp"
#include "beamdecay/domain.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"

namespace beamdecay {

using ExtendedVector = std::vector<long double>;

struct StationarySolution {
  Vector u_hat;                  ///< rounded to double
  ExtendedVector u_hat_extended;  ///< the iterate the residual was measured on
  double residual_norm = 0.0;
  int newton_iterations = 0;
  std::vector<double> residual_history;  ///< residual of every iterate, initial guess first
  std::string provenance;
};

/// l2 norm of A u + G(u) - f evaluated in extended precision.
double stationary_residual_norm(const ValidatedProblem& problem, std::span<const long double> u);

/// Newton on R(u) = A u + G(u) - f from u = A^{-1} f (or `initial_guess`),
/// stopping when ||R||_2 < tol. Throws Error when the forcing is
/// time-dependent or tol <= 0; SolverError on non-convergence or a singular
/// Jacobian.
StationarySolution solve_stationary(const ValidatedProblem& problem, double tol,
                                    std::optional<Vector> initial_guess = std::nullopt);

/// Same problem with f = 0 and initial data (u0 - u_hat, u1). For G = 0,
/// w = u - u_hat solves exactly this problem. Throws Error when G != 0.
ValidatedProblem shifted_problem(const ValidatedProblem& problem, const StationarySolution& solution);

struct CorollaryRow {
  double t = 0.0;
  double h2star_diff = 0.0;  ///< ||u(t) - u_hat||_{H2*}
  double l2_v = 0.0;         ///< ||u'(t)||_2
};

struct CorollaryReport {
  std::vector<CorollaryRow> rows;
  std::vector<EnergyRecord> shifted_records;  ///< energies of w = u - u_hat
  AuditReport energy_audit;
  /// Worst (value - envelope) / envelope(0) for the norm envelopes
  /// sqrt(2 prefactor H_w(0) e^{-r t}) (1 + tol); <= 0 when they hold.
  double diff_envelope_margin = -INFINITY;
  double velocity_envelope_margin = -INFINITY;
  DecayFit diff_rate;
  DecayFit velocity_rate;
  double certified_rate = 0.0;

  bool envelopes_hold() const noexcept {
    return energy_audit.passed() && diff_envelope_margin <= 0.0 && velocity_envelope_margin <= 0.0;
  }
  bool rates_dominate() const noexcept {
    return diff_rate.rate >= certified_rate && velocity_rate.rate >= certified_rate;
  }
};

/// Audits a static-forcing trajectory against the shifted problem's
/// certificate and fits tail rates (peak envelopes over [T/2, T]) of both
/// series. Throws ProvenanceError when the trajectory, solution and
/// certificate do not belong together.
CorollaryReport corollary_check(const Trajectory& traj, const StationarySolution& solution,
                                const Certificate& cert, const BandedOperator& op,
                                double tol = kDefaultAuditTolerance);

/// max_n max_i |u_n,i - (w_n,i + u_hat_i)|, and likewise for velocities.
double max_shift_deviation(const Trajectory& original, const Trajectory& shifted,
                           const StationarySolution& solution);

}  // namespace beamdecay
