#pragma once

#include "beamdecay/grid.hpp"

namespace beamdecay {

/// Time t with interior nodal displacement u and velocity v = u_t.
struct State {
  double t = 0.0;
  Vector u;
  Vector v;
};

}  // namespace beamdecay
