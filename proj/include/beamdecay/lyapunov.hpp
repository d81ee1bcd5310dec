#pragma once

#include <cstddef>
#include <span>

#include "beamdecay/domain.hpp"
#include "beamdecay/state.hpp"

namespace beamdecay {

/// One diagnostic row of a trajectory.
struct EnergyRecord {
  double t = 0.0;
  double E = 0.0;
  double H = 0.0;            ///< perturbed energy, or E when no certificate is active
  double dissipation = 0.0;  ///< (F(v), v)_h at the recorded state
  double l2_u = 0.0;
  double h2star_u = 0.0;
  double l2_v = 0.0;
  double sup_u = 0.0;
  int newton_iters = 0;  ///< Newton iterations of the step that produced this state
  /// dt * sum (F(w), w)_h over the steps since the previous record, w the
  /// midpoint velocity. Not part of the CSV schema.
  double work = 0.0;
};

/// E = 1/2 (v, v)_h + 1/2 (A u, u)_h.
double energy(const State& state, const BandedOperator& op);

/// H = E + eps (u, v)_h.
double perturbed_energy(const State& state, double eps, const BandedOperator& op);

/// (F(v), v)_h.
double dissipation(const State& state, const DampingSpec& damping, double h);
/// (F(w), w)_h for an arbitrary velocity field.
double dissipation(std::span<const double> velocity, const DampingSpec& damping, double h);

/// Full diagnostic row; H uses eps when given.
EnergyRecord make_record(const State& state, const ValidatedProblem& problem,
                         std::optional<double> eps);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct DecayFit {
  double rate = 0.0;       ///< minus the slope of ln(value) against t
  double intercept = 0.0;  ///< ln(value) at t = 0
  double residual = 0.0;   ///< root-mean-square residual of the log fit
  std::size_t samples = 0;
};

/// Least-squares line through (t, ln value) for samples with t in the
/// window. Throws Error on non-positive values or fewer than 10 samples.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> values,
                        FitWindow window);
/// Default window [T/2, T] with T the last sample time.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> values);

/// Decay rate of an oscillating series: fits the local maxima inside the
/// window. Throws Error when fewer than 3 peaks are found.
DecayFit fit_envelope_decay_rate(std::span<const double> t, std::span<const double> values,
                                 FitWindow window);

}  // namespace beamdecay
