#pragma once

// Problem statement for u_tt + u_xxxx + F(u_t) + G(u) = f(x, t) on (c, d)
// with hinged ends, and the gate that checks every hypothesis before any
// solver sees it.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beamdecay/grid.hpp"
#include "beamdecay/operators.hpp"

namespace beamdecay {

enum class DampingForm { canonical, custom };

/// One term c * sign(x) |x|^p of a composite damping law.
struct PowerTerm {
  double coefficient = 0.0;
  double exponent = 1.0;
};

/// Damping law F. The canonical family is F(x) = a (x + |x|^{m-2} x); a custom
/// law ships its own value and slope together with a declared envelope
/// a1 (|x| + |x|^{m-1}) <= |F(x)| <= a2 (|x| + |x|^{m-1}).
struct DampingSpec {
  double m = 2.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a = 0.0;
  DampingForm form = DampingForm::canonical;
  std::function<double(double)> custom_value;
  std::function<double(double)> custom_slope;
  std::string description;

  static DampingSpec canonical(double m, double a);
  static DampingSpec canonical(double m, double a, double a1, double a2);
  /// Sum of power terms; coefficients >= 0 and exponents >= 1.
  static DampingSpec composite(double m, double a1, double a2, std::vector<PowerTerm> terms);
  static DampingSpec custom(double m, double a1, double a2, std::function<double(double)> value,
                            std::function<double(double)> slope, std::string description);
};

enum class RestoringKind { zero, odd_power, custom };

/// Restoring term G together with the lower bound D of its primitive.
struct RestoringSpec {
  RestoringKind kind = RestoringKind::zero;
  double lambda = 0.0;
  int power = 1;
  double D = 0.0;
  std::function<double(double)> custom_value;
  std::function<double(double)> custom_slope;
  std::function<double(double)> custom_primitive;
  std::string description;

  static RestoringSpec zero();
  /// G(u) = lambda u^p, p odd, lambda >= 0.
  static RestoringSpec odd_power(double lambda, int p);
  static RestoringSpec custom(std::function<double(double)> value,
                              std::function<double(double)> slope,
                              std::function<double(double)> primitive, double D,
                              std::string description);
};

enum class ForcingKind { zero, static_profile, time_dependent };

/// f(x, t) = values_i * modulation(t); modulation is identically 1 for static.
struct ForcingSpec {
  ForcingKind kind = ForcingKind::zero;
  Vector values;
  std::function<double(double)> modulation;
  std::string description;

  static ForcingSpec zero();
  static ForcingSpec static_profile(Vector values);
  static ForcingSpec time_dependent(Vector profile, std::function<double(double)> modulation,
                                    std::string description);

  /// Nodal forcing at time t; `n` is used for the zero kind.
  Vector at(double t, std::size_t n) const;
};

struct InitialData {
  Vector u0;
  Vector u1;
};

struct SimConfig {
  double dt = 1e-3;
  double T = 10.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 20;
  int output_stride = 1;
};

struct ValidationOptions {
  /// Accept a = a1 = a2 = 0 (undamped runs for conservation tests). Such
  /// problems are never certificate-admissible.
  bool allow_undamped = false;
};

/// Immutable, fully checked problem. Only validate_problem constructs one.
class ValidatedProblem {
 public:
  const Grid& grid() const noexcept { return grid_; }
  const BeamDomain& domain() const noexcept { return grid_.domain(); }
  const DampingSpec& damping() const noexcept { return damping_; }
  const RestoringSpec& restoring() const noexcept { return restoring_; }
  const ForcingSpec& forcing() const noexcept { return forcing_; }
  const InitialData& initial() const noexcept { return initial_; }
  const SimConfig& config() const noexcept { return config_; }
  const BandedOperator& op() const noexcept { return op_; }

  /// True when G = 0, f = 0 and the damping envelope is declared.
  bool certificate_admissible() const noexcept { return !inadmissible_reason_.has_value(); }
  /// Names the failed hypothesis when not admissible.
  const std::optional<std::string>& inadmissible_reason() const noexcept {
    return inadmissible_reason_;
  }

  /// SHA-256 over every numeric input and descriptor; equal problems share it.
  const std::string& provenance() const noexcept { return provenance_; }

  const ValidationOptions& options() const noexcept { return options_; }

 private:
  friend ValidatedProblem validate_problem(const BeamDomain&, const Grid&, const DampingSpec&,
                                           const RestoringSpec&, const ForcingSpec&,
                                           const InitialData&, const SimConfig&,
                                           const ValidationOptions&);

  ValidatedProblem(Grid grid, DampingSpec damping, RestoringSpec restoring, ForcingSpec forcing,
                   InitialData initial, SimConfig config)
      : grid_(std::move(grid)),
        damping_(std::move(damping)),
        restoring_(std::move(restoring)),
        forcing_(std::move(forcing)),
        initial_(std::move(initial)),
        config_(config),
        op_(grid_) {}

  Grid grid_;
  DampingSpec damping_;
  RestoringSpec restoring_;
  ForcingSpec forcing_;
  InitialData initial_;
  SimConfig config_;
  BandedOperator op_;
  ValidationOptions options_;
  std::optional<std::string> inadmissible_reason_;
  std::string provenance_;
};

/// Checks every hypothesis and returns a sealed problem, or throws
/// ValidationError naming the violated one.
ValidatedProblem validate_problem(const BeamDomain& domain, const Grid& grid,
                                  const DampingSpec& damping, const RestoringSpec& restoring,
                                  const ForcingSpec& forcing, const InitialData& init,
                                  const SimConfig& cfg, const ValidationOptions& options = {});

/// Same problem with a different initial state / forcing / config; re-validated.
ValidatedProblem with_initial_data(const ValidatedProblem& problem, InitialData init);
ValidatedProblem with_forcing(const ValidatedProblem& problem, ForcingSpec forcing);
ValidatedProblem with_config(const ValidatedProblem& problem, const SimConfig& cfg);

/// Sign-symmetric, log-spaced sample set (including 0) used for spot checks.
std::vector<double> symmetric_sample_points(double lo_exp = -6.0, double hi_exp = 3.0,
                                            int per_side = 61);

}  // namespace beamdecay
