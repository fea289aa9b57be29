#include "hvpol/cascade.hpp"

#include <cmath>
#include <string>

#include "hvpol/error.hpp"
#include "parallel_for.hpp"

namespace hvpol {

double cascade_transmission(std::span<const Polarizer> stages, const QuadratureSpec& spec) {
  if (stages.empty()) throw DomainError("cascade_transmission: no stages");
  std::vector<double> axes;
  for (const auto& s : stages) axes.push_back(s.axis);
  const auto breaks = axis_breaks(axes);
  auto integrand = [&](double lambda) {
    double v = 1.0;
    for (const auto& s : stages) v *= s.profile(angular_distance(lambda, s.axis));
    return v;
  };
  return integrate_or_throw(integrand, breaks, spec, "cascade_transmission");
}

double pair_transmission_raw(const ProfileFn& profile, double alpha, const QuadratureSpec& spec) {
  const Polarizer stages[] = {{profile, 0.0}, {profile, alpha}};
  return cascade_transmission(stages, spec);
}

double pair_transmission_raw(const TransmissionProfileParams& p, double alpha,
                             const QuadratureSpec& spec) {
  return pair_transmission_raw(profile_fn(p), alpha, spec);
}

double pair_transmission_normalized(const ProfileFn& profile, double alpha,
                                    const QuadratureSpec& spec) {
  const double at_zero = pair_transmission_raw(profile, 0.0, spec);
  if (!(at_zero > 0.0)) throw NumericError("pair_transmission_normalized: zero transmission at 0");
  return pair_transmission_raw(profile, alpha, spec) / at_zero;
}

double pair_transmission_normalized(const TransmissionProfileParams& p, double alpha,
                                    const QuadratureSpec& spec) {
  return pair_transmission_normalized(profile_fn(p), alpha, spec);
}

double simple_output_distribution(const TransmissionProfileParams& p, double lambda) {
  return p1(angular_distance(lambda, 0.0), p) / kHalfPi;
}

double triple_transmission(const TransmissionProfileParams& p, double alpha, double beta,
                           const QuadratureSpec& spec) {
  const ProfileFn f = profile_fn(p);
  const Polarizer stages[] = {{f, 0.0}, {f, alpha}, {f, beta}};
  return cascade_transmission(stages, spec);
}

std::vector<double> degree_grid(double start_deg, double stop_deg, double step_deg) {
  if (!(step_deg > 0.0)) throw ConfigError("grid step must be > 0");
  if (!(stop_deg >= start_deg)) throw ConfigError("grid stop must be >= start");
  std::vector<double> out;
  // Tolerate round-off in (stop - start) / step when the grid is meant to hit stop.
  const auto count = static_cast<long>(std::floor((stop_deg - start_deg) / step_deg + 1e-9));
  for (long i = 0; i <= count; ++i) {
    const double deg = start_deg + static_cast<double>(i) * step_deg;
    out.push_back(deg == 0.0 ? 0.0 : deg_to_rad(deg));
  }
  return out;
}

TransmissionCurve curve(const std::function<double(double)>& fn, std::span<const double> grid,
                        Normalization normalization, Exec exec) {
  if (grid.empty()) throw ConfigError("curve: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("curve: grid must be strictly increasing");

  TransmissionCurve out;
  out.angles.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  out.normalization = normalization;
  detail::parallel_for(static_cast<std::ptrdiff_t>(grid.size()), exec,
                       [&](std::ptrdiff_t i) { out.values[i] = fn(grid[i]); });

  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (!(out.values[i] >= 0.0) || !std::isfinite(out.values[i]))
      throw NumericError("curve: negative or non-finite value at angle " +
                         std::to_string(grid[i]));

  switch (normalization) {
    case Normalization::raw:
      break;
    case Normalization::incident_density:
      for (double& v : out.values) v /= kPi;
      break;
    case Normalization::unit_at_zero: {
      std::size_t zero = grid.size();
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] == 0.0) zero = i;
      if (zero == grid.size()) throw ConfigError("curve: unit_at_zero needs 0 in the grid");
      const double scale = out.values[zero];
      if (!(scale > 0.0)) throw NumericError("curve: value at zero is not positive");
      for (double& v : out.values) v /= scale;
      out.values[zero] = 1.0;
      break;
    }
  }
  return out;
}

}  // namespace hvpol
