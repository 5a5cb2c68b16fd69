#include "possib/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "possib/error.hpp"

namespace possib {
namespace {

// First strict maximum of f(i) over i in [0, n). n >= 1.
template <typename F>
SupWitness first_max(std::size_t n, F&& f) {
  SupWitness best{f(0), 0};
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f(i);
    if (v > best.value) best = {v, i};
  }
  return best;
}

void require_range(std::span<const Variable> xs, std::size_t n, std::string_view context) {
  if (n == 0 || n > xs.size()) {
    throw StructuralError(std::string(context) + ": n=" + std::to_string(n) + " outside [1, " +
                          std::to_string(xs.size()) + "]");
  }
  for (std::size_t k = 1; k < n; ++k) require_same_space(xs[0].space(), xs[k].space(), context);
}

}  // namespace

double induced_measure(const PossibilityDistribution& dist, const Event& event) {
  require_same_space(dist.space(), event.space(), "induced_measure");
  double best = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (event.contains(i)) best = std::max(best, dist[i]);
  return best;
}

SupWitness expectation_sup_witness(const Variable& x, const PossibilityDistribution& dist) {
  require_same_space(x.space(), dist.space(), "expectation_sup");
  return first_max(x.size(), [&](std::size_t i) { return x[i] * dist[i]; });
}

double expectation_sup(const Variable& x, const PossibilityDistribution& dist) {
  return expectation_sup_witness(x, dist).value;
}

SupWitness variance_sup_witness(const Variable& x, const PossibilityDistribution& dist) {
  const double mean = expectation_sup(x, dist);
  return first_max(x.size(), [&](std::size_t i) {
    const double d = x[i] - mean;
    return d * d * dist[i];
  });
}

double variance_sup(const Variable& x, const PossibilityDistribution& dist) {
  return variance_sup_witness(x, dist).value;
}

ChebyshevCheck chebyshev_check(const Variable& x, const PossibilityDistribution& dist, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("chebyshev_check: radius must be a positive finite number");
  require_same_space(x.space(), dist.space(), "chebyshev_check");
  const double mean = expectation_sup(x, dist);
  std::vector<bool> mask(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mask[i] = std::abs(x[i] - mean) >= r;
  Event ev(x.space(), std::move(mask));
  const double actual = induced_measure(dist, ev);
  return ChebyshevCheck{std::move(ev), actual, variance_sup(x, dist) / (r * r)};
}

InequalitySides max_diff_bound(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) throw StructuralError("max_diff_bound: lists must be non-empty and equal length");
  const double max_a = *std::max_element(a.begin(), a.end());
  const double max_b = *std::max_element(b.begin(), b.end());
  double rhs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) rhs = std::max(rhs, std::abs(a[i] - b[i]));
  return {std::abs(max_a - max_b), rhs};
}

Variable max_aggregate(std::span<const Variable> xs, std::size_t n) {
  require_range(xs, n, "max_aggregate");
  std::vector<double> out(xs[0].values().begin(), xs[0].values().end());
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], xs[k][i]);
  return Variable(xs[0].space(), std::move(out));
}

NormalizedDeviation normalized_deviation(std::span<const Variable> xs, const PossibilityDistribution& dist,
                                         std::size_t n) {
  Variable m = max_aggregate(xs, n);
  const double e = expectation_sup(m, dist);
  const double scale = static_cast<double>(n);
  std::vector<double> avg(m.size()), dev(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    avg[i] = m[i] / scale;
    dev[i] = (m[i] - e) / scale;
  }
  Variable a(m.space(), std::move(avg));
  Variable y(m.space(), std::move(dev));
  return {std::move(m), std::move(a), std::move(y), e};
}

InequalitySides max_expectation_identity(std::span<const Variable> xs, const PossibilityDistribution& dist,
                                         std::size_t n) {
  const double lhs = expectation_sup(max_aggregate(xs, n), dist);
  double rhs = expectation_sup(xs[0], dist);
  for (std::size_t k = 1; k < n; ++k) rhs = std::max(rhs, expectation_sup(xs[k], dist));
  return {lhs, rhs};
}

}  // namespace possib
