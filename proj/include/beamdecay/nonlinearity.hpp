#pragma once

#include "beamdecay/domain.hpp"

namespace beamdecay {

/// F(x). Canonical: a (x + |x|^{m-2} x).
double damping_eval(const DampingSpec& spec, double x);

/// Slope used by Newton. Canonical: a (1 + (m-1) (|x| + eta)^{m-2}) with
/// eta = 1e-12, which keeps pow() away from 0^0 ambiguities near x = 0.
double damping_derivative(const DampingSpec& spec, double x);

inline constexpr double kSlopeRegularization = 1e-12;

double restoring_eval(const RestoringSpec& spec, double u);
double restoring_derivative(const RestoringSpec& spec, double u);
/// integral_0^u G(s) ds.
double restoring_primitive(const RestoringSpec& spec, double u);

/// Constant with integral |u|^m <= gamma integral u^2 whenever ||u||_inf <= M.
struct PowerBoundConstant {
  double M = 0.0;
  double m = 2.0;
  double gamma = 1.0;            ///< M^{m-2}
  double gamma_lipschitz = 1.0;  ///< ((m/2) M^{m/2-1})^2, the looser Lipschitz route
};

/// Throws Error if M <= 0 or m < 2.
PowerBoundConstant power_bound_gamma(double M, double m);

}  // namespace beamdecay
