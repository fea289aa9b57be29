#include "hvpol/profile.hpp"

#include <cmath>
#include <string>

#include "hvpol/error.hpp"

namespace hvpol {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
}

void require_half_range(double delta, const char* what) {
  if (!(delta >= 0.0 && delta <= kHalfPi))
    throw DomainError(std::string(what) + ": delta must lie in [0, pi/2], got " +
                      std::to_string(delta));
}

}  // namespace

TransmissionProfileParams::TransmissionProfileParams(double a, double e, double c)
    : a_(a), e_(e), c_(c) {
  require_positive(a, "a");
  require_positive(e, "e");
  require_positive(c, "c");
}

MalusTarget::MalusTarget(double eps_leak) : eps_leak_(eps_leak) {
  if (!(eps_leak >= 0.0 && eps_leak < 1.0))
    throw DomainError("eps_leak must lie in [0, 1), got " + std::to_string(eps_leak));
}

double phi(double gamma, const TransmissionProfileParams& p) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("phi: gamma must be >= 0, got " + std::to_string(gamma));
  const double x = p.a() * std::pow(gamma, p.e());
  const double t = std::exp(-x);
  return -std::expm1(-x) / (1.0 + p.c() * t);
}

double p1(double delta, const TransmissionProfileParams& p) {
  require_half_range(delta, "p1");
  // 1 - phi rewritten as t (1 + c) / (1 + c t); no cancellation near phi = 1.
  const double t = std::exp(-p.a() * std::pow(delta, p.e()));
  return t * (1.0 + p.c()) / (1.0 + p.c() * t);
}

double belifante_profile(double delta) {
  require_half_range(delta, "belifante_profile");
  const double c = std::cos(delta);
  return c * c;
}

double malus(double alpha, const MalusTarget& t) {
  const double c = std::cos(alpha);
  return (1.0 - t.eps_leak()) * c * c + t.eps_leak();
}

double qm_pair(double alpha) {
  const double c = std::cos(alpha);
  return c * c;
}

double qm_triple(double alpha, double beta) { return qm_pair(alpha) * qm_pair(alpha - beta); }

ProfileFn profile_fn(const TransmissionProfileParams& p) {
  return [p](double delta) { return p1(delta, p); };
}

ProfileFn belifante_fn() { return [](double delta) { return belifante_profile(delta); }; }

}  // namespace hvpol
