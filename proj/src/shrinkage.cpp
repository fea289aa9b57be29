#include "hvpol/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hvpol/angle.hpp"
#include "hvpol/error.hpp"
#include "parallel_for.hpp"

namespace hvpol {

ShrinkageParams::ShrinkageParams(double sigma, double eps_shift, double eta)
    : sigma_(sigma), eps_shift_(eps_shift), eta_(eta) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("sigma must be positive and finite, got " + std::to_string(sigma));
  if (!(eps_shift >= 0.0) || !std::isfinite(eps_shift))
    throw DomainError("eps_shift must be >= 0, got " + std::to_string(eps_shift));
  if (!(eta > kPi / 4.0 && eta < kHalfPi))
    throw DomainError("eta must lie in (pi/4, pi/2), got " + std::to_string(eta));
}

namespace {

// Odd extension on [-pi/2, pi/2] without canonicalization, so that -pi/2
// stays at the lower end of the interval.
double shift_raw(double lambda, const ShrinkageParams& s) {
  const double al = std::fabs(lambda);
  const double eps = s.eps_shift(), eta = s.eta();
  const double r = al <= eta ? al * (1.0 + eps * (eta - al))
                             : kHalfPi - (kHalfPi - al) * (1.0 + eps * (al - eta));
  return std::signbit(lambda) ? -r : r;
}

double gaussian_width(const ShrinkageParams& s) { return 1.0 / std::sqrt(2.0 * s.sigma()); }

void insert_inside(std::vector<double>& breaks, double x) {
  if (x > -kHalfPi && x < kHalfPi) breaks.push_back(x);
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double lambda_e(double lambda, const ShrinkageParams& s) {
  return shift_raw(canonical_angle(lambda), s);
}

double lambda_e_interval(double lambda, const ShrinkageParams& s) {
  return shift_raw(std::fabs(lambda) <= kHalfPi ? lambda : canonical_angle(lambda), s);
}

double convention_factor(TotalsConvention c) {
  switch (c) {
    case TotalsConvention::raw:
      return 1.0;
    case TotalsConvention::over_pi:
      return 1.0 / kPi;
    case TotalsConvention::over_half_pi:
      return 1.0 / kHalfPi;
  }
  return 1.0;
}

const char* convention_name(TotalsConvention c) {
  switch (c) {
    case TotalsConvention::raw:
      return "raw";
    case TotalsConvention::over_pi:
      return "over_pi";
    case TotalsConvention::over_half_pi:
      return "over_half_pi";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ShrinkageModel

ShrinkageModel::ShrinkageModel(const TransmissionProfileParams& profile,
                               const ShrinkageParams& shrink, const QuadratureSpec& spec)
    : profile_(profile),
      shrink_(shrink),
      spec_(spec),
      node_step_(0.0) {
  spec_.validate();
  // Refine by an integer factor (old nodes kept) until the spacing is at most
  // w/25; the 721-point base is already fine enough for sigma up to ~40.
  const double base = kPi / (kMinNormalizationNodes - 1);
  const double refine = std::ceil(base / (gaussian_width(shrink_) / 25.0));
  const int n = (kMinNormalizationNodes - 1) * static_cast<int>(std::max(1.0, refine)) + 1;
  node_step_ = kPi / (n - 1);
  norm_table_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double lp = k + 1 == n ? kHalfPi : -kHalfPi + k * node_step_;
    norm_table_[k] = normalization_direct(lp);
  }
}

std::vector<double> ShrinkageModel::lambda_breaks() const {
  std::vector<double> b{-kHalfPi, -shrink_.eta(), 0.0, shrink_.eta(), kHalfPi};
  // Kernel mass is truncated at +-pi/2; d(lambda) has a boundary layer where
  // lambda_e(lambda) comes within a few widths of the ends.
  const double w = gaussian_width(shrink_);
  for (double k : {2.0, 6.0, 12.0}) {
    if (k * w >= kHalfPi) continue;
    const double x = inverse_lambda_e(kHalfPi - k * w);
    insert_inside(b, x);
    insert_inside(b, -x);
  }
  return sorted_unique(std::move(b));
}

std::vector<double> ShrinkageModel::peak_breaks(double center, std::vector<double> breaks) const {
  const double w = gaussian_width(shrink_);
  insert_inside(breaks, center);
  for (double k : {2.0, 6.0, 12.0}) {
    insert_inside(breaks, center - k * w);
    insert_inside(breaks, center + k * w);
  }
  return sorted_unique(std::move(breaks));
}

double ShrinkageModel::inverse_lambda_e(double u) const {
  double lo = -kHalfPi, hi = kHalfPi;
  if (u <= shift_raw(lo, shrink_)) return lo;
  if (u >= shift_raw(hi, shrink_)) return hi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shift_raw(mid, shrink_) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ShrinkageModel::normalization_direct(double lambda_prime) const {
  const double sigma = shrink_.sigma();
  // Peak in lambda sits where lambda_e(lambda) = lambda'.
  std::vector<double> base{-kHalfPi, -shrink_.eta(), 0.0, shrink_.eta(), kHalfPi};
  const auto breaks = peak_breaks(inverse_lambda_e(lambda_prime), std::move(base));
  auto g = [&](double lambda) {
    const double x = lambda_prime - shift_raw(lambda, shrink_);
    return std::exp(-sigma * x * x);
  };
  const double mass = integrate_or_throw(g, breaks, spec_, "kernel normalization");
  if (!(mass > 0.0)) throw NumericError("kernel normalization: zero mass");
  return 1.0 / mass;
}

double ShrinkageModel::normalization(double lambda_prime) const {
  const double x = (std::clamp(lambda_prime, -kHalfPi, kHalfPi) + kHalfPi) / node_step_;
  const int last = static_cast<int>(norm_table_.size()) - 1;
  const int k = std::clamp(static_cast<int>(std::floor(x)), 0, last);
  if (static_cast<double>(k) == x) return norm_table_[k];
  // six-point Lagrange; cubic is ~4e-7 off near the ends at sigma ~ 40
  constexpr int kPts = 6;
  const int j = std::clamp(k - 2, 0, last - (kPts - 1));
  const double t = x - j;
  double sum = 0.0;
  for (int i = 0; i < kPts; ++i) {
    double w = 1.0;
    for (int m = 0; m < kPts; ++m)
      if (m != i) w *= (t - m) / (i - m);
    sum += w * norm_table_[j + i];
  }
  return sum;
}

double ShrinkageModel::kernel(double lambda, double lambda_prime) const {
  const double x = lambda_prime - lambda_e_interval(lambda, shrink_);
  return normalization(lambda_prime) * std::exp(-shrink_.sigma() * x * x);
}

double ShrinkageModel::kernel_mass(double lambda_prime, double lo, double hi) const {
  if (!(lo < hi)) throw DomainError("kernel_mass: need lo < hi");
  lo = std::max(lo, -kHalfPi);
  hi = std::min(hi, kHalfPi);
  std::vector<double> base{lo, hi};
  for (double x : {-shrink_.eta(), 0.0, shrink_.eta()})
    if (x > lo && x < hi) base.push_back(x);
  auto breaks = peak_breaks(inverse_lambda_e(lambda_prime), std::move(base));
  std::erase_if(breaks, [&](double x) { return x < lo || x > hi; });
  auto f = [&](double lambda) { return kernel(lambda, lambda_prime); };
  return integrate_or_throw(f, breaks, spec_, "kernel_mass");
}

double ShrinkageModel::output_distribution(double lambda) const {
  const double center = lambda_e(lambda, shrink_);
  const double sigma = shrink_.sigma();
  const auto breaks = peak_breaks(center, {-kHalfPi, 0.0, kHalfPi});
  auto f = [&](double lp) {
    const double x = lp - center;
    return p1(std::fabs(lp), profile_) * normalization(lp) * std::exp(-sigma * x * x);
  };
  return integrate_or_throw(f, breaks, spec_, "output_distribution");
}

OutputDistribution ShrinkageModel::output_distribution(std::span<const double> grid,
                                                       Exec exec) const {
  OutputDistribution out;
  out.grid.assign(grid.begin(), grid.end());
  out.densities.resize(grid.size());
  detail::parallel_for(static_cast<std::ptrdiff_t>(grid.size()), exec, [&](std::ptrdiff_t i) {
    out.densities[i] = output_distribution(grid[i]);
  });
  return out;
}

double ShrinkageModel::pair_transmission(double alpha) const {
  auto breaks = lambda_breaks();
  for (double x : axis_breaks(std::vector<double>{alpha})) breaks.push_back(x);
  breaks = sorted_unique(std::move(breaks));
  auto f = [&](double lambda) {
    return output_distribution(lambda) * p1(angular_distance(lambda, alpha), profile_);
  };
  return integrate_or_throw(f, breaks, spec_, "pair_transmission_shrinkage");
}

TotalRatios ShrinkageModel::total_ratios(TotalsConvention convention) const {
  const auto breaks = lambda_breaks();
  auto d = [&](double lambda) { return output_distribution(lambda); };
  const double i1 = integrate_or_throw(d, breaks, spec_, "total_ratios");
  const double n = convention_factor(convention);
  return {n * i1, n * pair_transmission(0.0)};
}

// ---------------------------------------------------------------------------
// ShrinkageGrid

namespace {

// Barycentric weights of the Legendre points: (-1)^k sqrt((1 - x_k^2) w_k).
std::vector<double> barycentric_weights(const GaussLegendreRule& rule) {
  std::vector<double> b(rule.nodes.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double x = rule.nodes[k];
    b[k] = ((k % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - x * x) * rule.weights[k]);
  }
  return b;
}

}  // namespace

ShrinkageGrid::ShrinkageGrid(const TransmissionProfileParams& profile,
                             const ShrinkageParams& shrink, int nodes_per_panel)
    : profile_(profile), shrink_(shrink), nodes_per_panel_(nodes_per_panel) {
  if (nodes_per_panel < 4) throw DomainError("ShrinkageGrid: need at least 4 nodes per panel");
  const double sigma = shrink.sigma();
  const double h_max = std::min(0.2, 6.0 * gaussian_width(shrink));
  const double segs[] = {-kHalfPi, -shrink.eta(), 0.0, shrink.eta(), kHalfPi};
  edges_.push_back(segs[0]);
  for (int s = 0; s < 4; ++s) {
    const double len = segs[s + 1] - segs[s];
    const int m = std::max(1, static_cast<int>(std::ceil(len / h_max)));
    for (int k = 1; k <= m; ++k) edges_.push_back(k == m ? segs[s + 1] : segs[s] + len * k / m);
  }

  const GaussLegendreRule& rule = gauss_legendre(nodes_per_panel);
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    const double half = 0.5 * (edges_[p + 1] - edges_[p]);
    const double mid = 0.5 * (edges_[p + 1] + edges_[p]);
    for (int i = 0; i < nodes_per_panel; ++i) {
      nodes_.push_back(mid + half * rule.nodes[i]);
      weights_.push_back(half * rule.weights[i]);
    }
  }

  const std::size_t n = nodes_.size();
  std::vector<double> shifted(n), trans(n);
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] = shift_raw(nodes_[i], shrink);
    trans[i] = p1(std::fabs(nodes_[i]), profile);
  }
  const bool monotone = std::is_sorted(shifted.begin(), shifted.end());
  const double cutoff = std::sqrt(40.0 / sigma);  // exp(-40) is below double resolution of O(1) sums

  // Index window [first, last) of sorted values within cutoff of x.
  auto window = [&](const std::vector<double>& sorted_vals, double x) {
    const auto lo = std::lower_bound(sorted_vals.begin(), sorted_vals.end(), x - cutoff);
    const auto hi = std::upper_bound(sorted_vals.begin(), sorted_vals.end(), x + cutoff);
    return std::pair<std::size_t, std::size_t>(lo - sorted_vals.begin(), hi - sorted_vals.begin());
  };

  // A at every node used as lambda', normalized over the lambda nodes.
  std::vector<double> norm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [lo, hi] = monotone ? window(shifted, nodes_[j]) : std::pair<std::size_t, std::size_t>{0, n};
    double mass = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = nodes_[j] - shifted[i];
      mass += weights_[i] * std::exp(-sigma * x * x);
    }
    if (!(mass > 0.0)) throw NumericError("ShrinkageGrid: zero kernel mass");
    norm[j] = 1.0 / mass;
  }

  density_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = window(nodes_, shifted[i]);
    double d = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double x = nodes_[j] - shifted[i];
      d += weights_[j] * trans[j] * norm[j] * std::exp(-sigma * x * x);
    }
    density_[i] = d;
  }
  bary_ = barycentric_weights(rule);
  ref_nodes_ = rule.nodes;
}

double ShrinkageGrid::density_at(double lambda) const {
  lambda = std::clamp(lambda, -kHalfPi, kHalfPi);
  auto it = std::upper_bound(edges_.begin(), edges_.end(), lambda);
  std::size_t p = it == edges_.begin() ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
  p = std::min(p, edges_.size() - 2);
  const double lo = edges_[p], hi = edges_[p + 1];
  const double t = (2.0 * lambda - lo - hi) / (hi - lo);
  const double* f = &density_[p * nodes_per_panel_];
  double num = 0.0, den = 0.0;
  for (int k = 0; k < nodes_per_panel_; ++k) {
    const double diff = t - ref_nodes_[k];
    if (diff == 0.0) return f[k];
    const double c = bary_[k] / diff;
    num += c * f[k];
    den += c;
  }
  return num / den;
}

double ShrinkageGrid::pair_transmission(double alpha) const {
  // Kinks of p1(delta(., alpha)) inside (-pi/2, pi/2).
  double kinks[3];
  int nk = 0;
  for (double x : {canonical_angle(alpha), canonical_angle(alpha + kHalfPi)})
    if (x < kHalfPi) kinks[nk++] = x;
  std::sort(kinks, kinks + nk);

  const GaussLegendreRule& rule = gauss_legendre(nodes_per_panel_);
  const std::size_t m = static_cast<std::size_t>(nodes_per_panel_);
  std::vector<double> terms;
  terms.reserve(nodes_.size() + 2 * m);
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    const double lo = edges_[p], hi = edges_[p + 1];
    double cuts[4] = {lo};
    int nc = 1;
    for (int k = 0; k < nk; ++k)
      if (kinks[k] > lo && kinks[k] < hi) cuts[nc++] = kinks[k];
    if (nc == 1) {
      for (std::size_t i = p * m; i < (p + 1) * m; ++i)
        terms.push_back(weights_[i] * density_[i] * p1(angular_distance(nodes_[i], alpha), profile_));
      continue;
    }
    cuts[nc++] = hi;
    for (int c = 0; c + 1 < nc; ++c) {
      const double half = 0.5 * (cuts[c + 1] - cuts[c]);
      const double mid = 0.5 * (cuts[c + 1] + cuts[c]);
      for (std::size_t i = 0; i < m; ++i) {
        const double x = mid + half * rule.nodes[i];
        terms.push_back(half * rule.weights[i] * density_at(x) * p1(angular_distance(x, alpha), profile_));
      }
    }
  }
  return pairwise_sum(terms);
}

}  // namespace hvpol
