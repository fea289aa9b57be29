#include "hvpol/angle.hpp"

#include <cmath>

#include "hvpol/error.hpp"

namespace hvpol {

double canonical_angle(double radians) {
  if (!std::isfinite(radians)) throw DomainError("angle must be finite");
  // remainder() lands in [-pi/2, pi/2]; the lower end belongs to the upper class.
  double r = std::remainder(radians, kPi);
  if (r <= -kHalfPi) r += kPi;
  return r;
}

double angular_distance(double x, double y) {
  return std::fabs(std::remainder(x - y, kPi));
}

}  // namespace hvpol
