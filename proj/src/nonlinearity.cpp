#include "beamdecay/nonlinearity.hpp"

#include <cmath>

#include "beamdecay/error.hpp"

namespace beamdecay {

double damping_eval(const DampingSpec& spec, double x) {
  if (spec.form == DampingForm::custom) return spec.custom_value(x);
  const double ax = std::abs(x);
  return spec.a * (x + std::pow(ax, spec.m - 2.0) * x);
}

double damping_derivative(const DampingSpec& spec, double x) {
  if (spec.form == DampingForm::custom) return spec.custom_slope(x);
  const double ax = std::abs(x) + kSlopeRegularization;
  return spec.a * (1.0 + (spec.m - 1.0) * std::pow(ax, spec.m - 2.0));
}

double restoring_eval(const RestoringSpec& spec, double u) {
  switch (spec.kind) {
    case RestoringKind::zero:
      return 0.0;
    case RestoringKind::odd_power:
      return spec.lambda * std::pow(u, spec.power);
    case RestoringKind::custom:
      return spec.custom_value(u);
  }
  return 0.0;
}

double restoring_derivative(const RestoringSpec& spec, double u) {
  switch (spec.kind) {
    case RestoringKind::zero:
      return 0.0;
    case RestoringKind::odd_power:
      return spec.power == 1 ? spec.lambda
                             : spec.lambda * spec.power * std::pow(u, spec.power - 1);
    case RestoringKind::custom:
      return spec.custom_slope(u);
  }
  return 0.0;
}

double restoring_primitive(const RestoringSpec& spec, double u) {
  switch (spec.kind) {
    case RestoringKind::zero:
      return 0.0;
    case RestoringKind::odd_power:
      return spec.lambda * std::pow(u, spec.power + 1) / (spec.power + 1);
    case RestoringKind::custom:
      return spec.custom_primitive(u);
  }
  return 0.0;
}

PowerBoundConstant power_bound_gamma(double M, double m) {
  if (!(M > 0.0)) throw Error("power_bound_gamma: require M > 0");
  if (!(m >= 2.0)) throw Error("power_bound_gamma: require m >= 2");
  PowerBoundConstant out;
  out.M = M;
  out.m = m;
  out.gamma = std::pow(M, m - 2.0);
  const double lipschitz = 0.5 * m * std::pow(M, 0.5 * m - 1.0);
  out.gamma_lipschitz = lipschitz * lipschitz;
  return out;
}

}  // namespace beamdecay
