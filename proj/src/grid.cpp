#include "beamdecay/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamdecay/error.hpp"

namespace beamdecay {

Grid::Grid(const BeamDomain& domain, int subdivisions)
    : domain_(domain), subdivisions_(subdivisions), spacing_(0.0) {
  if (!std::isfinite(domain.c) || !std::isfinite(domain.d) || !(domain.c < domain.d)) {
    throw ValidationError("domain: require c < d (got c = " + std::to_string(domain.c) +
                          ", d = " + std::to_string(domain.d) + ")");
  }
  if (subdivisions < 4) {
    throw ValidationError("grid: N = " + std::to_string(subdivisions) + " violates N >= 4");
  }
  spacing_ = domain.length() / static_cast<double>(subdivisions);
}

Vector Grid::nodes() const {
  Vector x(interior_size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  return x;
}

Vector Grid::sine_mode(int k, double amplitude) const {
  Vector out(interior_size());
  const double n = static_cast<double>(subdivisions_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = amplitude * std::sin(static_cast<double>(k) * std::numbers::pi *
                                  static_cast<double>(i + 1) / n);
  }
  return out;
}

}  // namespace beamdecay
