#pragma once

#include <cstddef>
#include <vector>

namespace beamdecay {

using Vector = std::vector<double>;

/// The open interval (c, d) occupied by the beam.
struct BeamDomain {
  double c = 0.0;
  double d = 0.0;

  double length() const noexcept { return d - c; }
};

/// Uniform subdivision of the domain into N cells. Only the N-1 interior
/// nodes carry unknowns; u and u_xx vanish at both endpoints.
class Grid {
 public:
  /// Throws ValidationError when c >= d or N < 4.
  Grid(const BeamDomain& domain, int subdivisions);

  const BeamDomain& domain() const noexcept { return domain_; }
  int subdivisions() const noexcept { return subdivisions_; }
  std::size_t interior_size() const noexcept { return static_cast<std::size_t>(subdivisions_ - 1); }
  double spacing() const noexcept { return spacing_; }
  double length() const noexcept { return domain_.length(); }

  /// Position of interior node i (0-based), i.e. c + (i + 1) h.
  double node(std::size_t i) const noexcept {
    return domain_.c + static_cast<double>(i + 1) * spacing_;
  }
  Vector nodes() const;

  /// amplitude * sin(k pi (x_i - c) / L) sampled on the interior nodes.
  Vector sine_mode(int k, double amplitude = 1.0) const;

 private:
  BeamDomain domain_;
  int subdivisions_;
  double spacing_;
};

}  // namespace beamdecay
