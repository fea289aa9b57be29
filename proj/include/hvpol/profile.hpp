#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "hvpol/angle.hpp"

namespace hvpol {

/// Shape parameters (a, e, c) of the single-polarizer transmission profile
/// p1(delta) = 1 - phi(delta), phi(g) = (1 - exp(-a g^e)) / (1 + c exp(-a g^e)).
class TransmissionProfileParams {
 public:
  TransmissionProfileParams(double a, double e, double c);

  double a() const { return a_; }
  double e() const { return e_; }
  double c() const { return c_; }

  friend bool operator==(const TransmissionProfileParams&, const TransmissionProfileParams&) = default;

 private:
  double a_, e_, c_;
};

/// Leakage of a non-ideal polarizer pair in the generalized Malus law.
class MalusTarget {
 public:
  explicit MalusTarget(double eps_leak = 0.0);
  double eps_leak() const { return eps_leak_; }

 private:
  double eps_leak_;
};

double phi(double gamma, const TransmissionProfileParams& p);

/// Transmission probability at axis separation delta in [0, pi/2].
double p1(double delta, const TransmissionProfileParams& p);

/// cos^2(delta); the profile whose pair curve departs from Malus.
double belifante_profile(double delta);

double malus(double alpha, const MalusTarget& t);
double qm_pair(double alpha);
double qm_triple(double alpha, double beta);

/// Any profile delta -> [0, 1] defined on [0, pi/2].
using ProfileFn = std::function<double(double)>;

ProfileFn profile_fn(const TransmissionProfileParams& p);
ProfileFn belifante_fn();

}  // namespace hvpol
