#include "hvpol/fitting.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hvpol/cascade.hpp"
#include "hvpol/error.hpp"
#include "hvpol/optimize.hpp"
#include "hvpol/philox.hpp"
#include "hvpol/presets.hpp"
#include "hvpol/shrinkage.hpp"
#include "parallel_for.hpp"

namespace hvpol {

namespace {

std::size_t param_count(ModelKind m) { return m == ModelKind::simple ? 3 : 6; }

// a, e, c and sigma are positive scales and are fitted in log space.
bool log_coordinate(std::size_t i) { return i < 4; }

std::vector<double> to_fit(std::span<const double> params) {
  std::vector<double> x(params.begin(), params.end());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (log_coordinate(i)) x[i] = std::log(x[i]);
  return x;
}

std::vector<double> from_fit(std::span<const double> x, const std::vector<ParamBounds>& bounds) {
  std::vector<double> p(x.begin(), x.end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (log_coordinate(i)) p[i] = std::exp(p[i]);
    p[i] = std::clamp(p[i], bounds[i].lo, bounds[i].hi);
  }
  return p;
}

double weighted_sse(const FitProblem& problem, std::span<const double> curve_values) {
  std::vector<double> terms(curve_values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double r = curve_values[i] - malus(problem.grid[i], problem.target);
    terms[i] = problem.weights[i] * r * r;
  }
  return pairwise_sum(terms);
}

}  // namespace

const char* model_name(ModelKind m) { return m == ModelKind::simple ? "simple" : "shrinkage"; }

std::vector<std::string_view> parameter_names(ModelKind m) {
  if (m == ModelKind::simple) return {"a", "e", "c"};
  return {"a", "e", "c", "sigma", "eps_shift", "eta"};
}

std::vector<ParamBounds> default_bounds(ModelKind m) {
  std::vector<ParamBounds> b{{1e-3, 1e3}, {0.1, 20.0}, {1e-3, 1e5}};
  if (m == ModelKind::shrinkage) {
    b.push_back({0.5, 1e4});
    b.push_back({0.0, 1.0});
    b.push_back({kPi / 4.0 + 1e-6, kHalfPi - 1e-6});
  }
  return b;
}

FitProblem FitProblem::with_defaults(ModelKind model, MalusTarget target) {
  FitProblem p;
  p.model = model;
  p.target = target;
  p.grid = degree_grid(0.0, 90.0, 1.0);
  p.weights.assign(p.grid.size(), 1.0);
  if (model == ModelKind::simple) {
    const auto f = presets::fig1_simple();
    p.start = {f.a(), f.e(), f.c()};
  } else {
    const auto f = presets::fig2_profile();
    const auto s = presets::fig2_shrinkage();
    p.start = {f.a(), f.e(), f.c(), s.sigma(), s.eps_shift(), s.eta()};
  }
  p.bounds = default_bounds(model);
  return p;
}

void FitProblem::validate() const {
  const std::size_t n = param_count(model);
  if (grid.empty()) throw ConfigError("fit: empty grid");
  if (weights.size() != grid.size()) throw ConfigError("fit: weights and grid differ in length");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("fit: weights must be >= 0");
  if (start.size() != n || bounds.size() != n)
    throw ConfigError(std::string("fit: ") + model_name(model) + " model needs " +
                      std::to_string(n) + " parameters and bounds");
  const auto names = parameter_names(model);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(bounds[i].lo <= bounds[i].hi))
      throw ConfigError("fit: bounds for " + std::string(names[i]) + " are empty");
    if (log_coordinate(i) && !(bounds[i].lo > 0.0))
      throw ConfigError("fit: lower bound for " + std::string(names[i]) + " must be > 0");
    if (!(start[i] >= bounds[i].lo && start[i] <= bounds[i].hi))
      throw ConfigError("fit: start value for " + std::string(names[i]) + " is outside its bounds");
  }
  if (model == ModelKind::shrinkage &&
      !(bounds[5].lo > kPi / 4.0 && bounds[5].hi < kHalfPi))
    throw ConfigError("fit: eta bounds must lie inside (pi/4, pi/2)");
  quad.validate();
}

std::vector<double> model_curve(const FitProblem& problem, std::span<const double> params) {
  const TransmissionProfileParams profile(params[0], params[1], params[2]);
  std::vector<double> out(problem.grid.size());
  if (problem.model == ModelKind::simple) {
    const double at_zero = pair_transmission_raw(profile, 0.0, problem.quad);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = pair_transmission_raw(profile, problem.grid[i], problem.quad) / at_zero;
  } else {
    const ShrinkageGrid model(profile, ShrinkageParams(params[3], params[4], params[5]));
    const double at_zero = model.pair_transmission(0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = model.pair_transmission(problem.grid[i]) / at_zero;
  }
  return out;
}

double objective(const FitProblem& problem, std::span<const double> params) {
  if (params.size() != problem.bounds.size()) throw ConfigError("objective: wrong parameter count");
  const auto names = parameter_names(problem.model);
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!(params[i] >= problem.bounds[i].lo && params[i] <= problem.bounds[i].hi))
      throw ConfigError("objective: parameter " + std::string(names[i]) + " out of bounds");
  return weighted_sse(problem, model_curve(problem, params));
}

FitResult minimize(const FitProblem& problem, const FitOptions& options) {
  problem.validate();
  if (options.starts < 1) throw ConfigError("fit: starts must be >= 1");
  const std::size_t n = problem.start.size();

  std::vector<double> lo(n), hi(n), steps(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = log_coordinate(i) ? std::log(problem.bounds[i].lo) : problem.bounds[i].lo;
    hi[i] = log_coordinate(i) ? std::log(problem.bounds[i].hi) : problem.bounds[i].hi;
    steps[i] = log_coordinate(i) ? 0.2 : 0.05;
  }
  const std::vector<double> origin = to_fit(problem.start);

  auto fit_objective = [&](std::span<const double> x) {
    try {
      return weighted_sse(problem, model_curve(problem, from_fit(x, problem.bounds)));
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  SimplexOptions simplex;
  simplex.max_iterations = options.max_iterations;
  simplex.diameter_tol = options.diameter_tol;
  simplex.spread_tol = options.spread_tol;

  std::vector<SimplexResult> replicas(static_cast<std::size_t>(options.starts));
  detail::parallel_for(options.starts, options.exec, [&](std::ptrdiff_t k) {
    std::vector<double> x0 = origin;
    if (k > 0) {
      PhiloxStream rng(options.seed, static_cast<std::uint64_t>(k));
      for (std::size_t i = 0; i < n; ++i)
        x0[i] = std::clamp(x0[i] + options.start_dispersion * rng.normal(), lo[i], hi[i]);
    }
    replicas[static_cast<std::size_t>(k)] = nelder_mead(fit_objective, x0, steps, lo, hi, simplex);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < replicas.size(); ++k)
    if (replicas[k].value < replicas[best].value) best = k;

  FitResult res;
  res.params = from_fit(replicas[best].x, problem.bounds);
  const auto curve_values = model_curve(problem, res.params);
  res.objective = weighted_sse(problem, curve_values);
  res.iterations = replicas[best].iterations;
  res.converged = replicas[best].converged;
  res.best_start = static_cast<int>(best);
  std::size_t informative = 0;
  for (double w : problem.weights) informative += w > 0.0;
  res.under_determined = informative < n;
  res.per_point_residuals.resize(curve_values.size());
  for (std::size_t i = 0; i < curve_values.size(); ++i)
    res.per_point_residuals[i] = curve_values[i] - malus(problem.grid[i], problem.target);
  return res;
}

std::vector<ResidualRow> residual_report(const FitResult& result, const FitProblem& problem) {
  const auto values = model_curve(problem, result.params);
  std::vector<ResidualRow> rows(values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double target = malus(problem.grid[i], problem.target);
    rows[i] = {problem.grid[i], values[i], target, values[i] - target};
  }
  return rows;
}

}  // namespace hvpol
