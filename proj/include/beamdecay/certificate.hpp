#pragma once

// Explicit exponential-decay certificate for the damped beam with G = 0 and
// f = 0, and the audit of computed trajectories against it.
//
// Along any trajectory, with H = E + eps (u, u_t),
//   H' <= -eps E,   |H - E| <= eps kappa E,
// so H(t) <= H(0) e^{-r t} and E(t) <= H(0) e^{-r t} / (1 - eps kappa) with
// r = eps / (1 + eps kappa). Here kappa = max(B, B^2); it equals B^2 for the
// usual B >= 1 and keeps the H-E bound valid when B < 1.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamdecay/domain.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/operators.hpp"

namespace beamdecay {

struct TraceEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
};

/// Raw parameters of the constant chain.
struct CertificateInputs {
  double a1 = 0.0;
  double a2 = 0.0;
  double m = 2.0;
  double B = 1.0;
  double k_inf = 0.0;
  double E0 = 0.0;
};

struct Certificate {
  double a1 = 0.0;
  double a2 = 0.0;
  double m = 2.0;
  double E0 = 0.0;
  double B = 0.0;
  double k_inf = 0.0;
  double M = 0.0;          ///< sup bound k_inf sqrt(2 E0)
  double gamma = 0.0;      ///< M^{m-2}
  double delta = 0.0;      ///< 1 / (4 a2 gamma B^2)
  double c_delta = 0.0;    ///< ((m-1)/m) (m delta)^{-1/(m-1)}
  double kappa = 0.0;      ///< max(B, B^2)
  double eps = 0.0;
  double r = 0.0;          ///< eps / (1 + eps kappa)
  double prefactor = 0.0;  ///< 1 / (1 - eps kappa)
  std::vector<TraceEntry> trace;
  std::string provenance;  ///< problem the certificate was computed for, if any

  /// Value of a trace entry by name; throws Error when absent.
  double value(const std::string& name) const;
};

/// Sharp conjugate constant c with X Y <= delta X^m + c Y^{m/(m-1)}.
double young_conjugate_constant(double m, double delta);

/// Evaluates the chain. Throws Error when E0 <= 0, a1 <= 0, a1 > a2, m < 2
/// or B <= 0.
Certificate compute_certificate(const CertificateInputs& inputs);

/// Throws ValidationError naming the failed hypothesis when the problem is
/// not certificate-admissible, and Error when E0 <= 0.
Certificate compute_certificate(const ValidatedProblem& problem, double E0,
                                const DiscreteConstants& constants);
/// E0 from the problem's initial data and constants from its grid.
Certificate compute_certificate(const ValidatedProblem& problem);

struct CheckResult {
  std::string name;
  bool passed = true;
  /// Largest (lhs - rhs) / E0 over all records; <= 0 when the check holds.
  double worst_margin = -INFINITY;
  std::optional<std::size_t> first_violation;
  double first_violation_time = 0.0;
};

struct AuditReport {
  std::array<CheckResult, 4> checks;
  double tol = 0.05;

  bool passed() const noexcept;
};

inline constexpr double kDefaultAuditTolerance = 0.05;

/// Checks, for every record n:
///   (i)   E_n <= prefactor H_0 e^{-r t_n} (1 + tol)
///   (ii)  H_n <= H_0 e^{-r t_n} (1 + tol)
///   (iii) (H_{n+1} - H_n) / (t_{n+1} - t_n) <= -eps (E_n + E_{n+1}) / 2 + tol E_0 r
///   (iv)  |H_n - E_n| <= eps kappa E_n (1 + tol)
/// The H column must have been produced with the certificate's eps.
AuditReport verify_trajectory(std::span<const EnergyRecord> records, const Certificate& cert,
                              double tol = kDefaultAuditTolerance);

/// As above; throws ProvenanceError when the trajectory was produced for a
/// different problem or with a different eps.
AuditReport verify_trajectory(const Trajectory& traj, const Certificate& cert,
                              double tol = kDefaultAuditTolerance);

}  // namespace beamdecay
