#include "s2r2/rng.hpp"

#include <cmath>

namespace s2r2 {

double SplitMix64::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace s2r2
