#pragma once

#include <numbers>

namespace hvpol {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Map any real angle onto the representative of its axis class in (-pi/2, pi/2].
double canonical_angle(double radians);

/// Orientation of a polarizer axis or photon polarization. Axes carry no
/// direction, so values are identified modulo pi.
class PolarizationAngle {
 public:
  constexpr PolarizationAngle() = default;
  explicit PolarizationAngle(double radians) : rad_(canonical_angle(radians)) {}

  static PolarizationAngle from_degrees(double deg) { return PolarizationAngle(deg_to_rad(deg)); }

  double radians() const { return rad_; }
  double degrees() const { return rad_to_deg(rad_); }

  friend bool operator==(PolarizationAngle, PolarizationAngle) = default;

 private:
  double rad_ = 0.0;
};

/// Axis separation on the mod-pi circle, in [0, pi/2].
double angular_distance(double x, double y);

inline double angular_distance(PolarizationAngle x, PolarizationAngle y) {
  return angular_distance(x.radians(), y.radians());
}

}  // namespace hvpol
