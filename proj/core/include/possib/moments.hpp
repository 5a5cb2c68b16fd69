#pragma once

#include <cstddef>
#include <span>

#include "possib/space.hpp"

namespace possib {

/// Value and location of a maximum. Ties go to the first outcome in
/// canonical order.
struct SupWitness {
  double value;
  std::size_t index;
};

/// P_lambda(A) = max of lambda over A, and 0 for the empty event.
double induced_measure(const PossibilityDistribution& dist, const Event& event);

/// E_sup(X) = max_s X(s) * lambda(s). No sign handling: negative values are
/// multiplied by their weight exactly as written.
double expectation_sup(const Variable& x, const PossibilityDistribution& dist);
SupWitness expectation_sup_witness(const Variable& x, const PossibilityDistribution& dist);

/// Var_sup(X) = max_s (X(s) - E_sup(X))^2 * lambda(s).
double variance_sup(const Variable& x, const PossibilityDistribution& dist);
SupWitness variance_sup_witness(const Variable& x, const PossibilityDistribution& dist);

struct ChebyshevCheck {
  Event deviation_event;  // {s : |X(s) - E_sup(X)| >= r}
  double actual;          // P_lambda(deviation_event)
  double bound;           // Var_sup(X) / r^2
  double margin() const noexcept { return bound - actual; }
  bool holds(double slack) const noexcept { return actual <= bound + slack; }
};

/// Both sides of the maxitive Chebyshev inequality at radius r > 0.
ChebyshevCheck chebyshev_check(const Variable& x, const PossibilityDistribution& dist, double r);

struct InequalitySides {
  double lhs;
  double rhs;
};

/// (|max a - max b|, max |a_i - b_i|) for equal-length non-empty lists.
InequalitySides max_diff_bound(std::span<const double> a, std::span<const double> b);

/// M_n: pointwise maximum of the first n variables (1 <= n <= xs.size()).
Variable max_aggregate(std::span<const Variable> xs, std::size_t n);

struct NormalizedDeviation {
  Variable maximum;           // M_n
  Variable average;           // A_n = M_n / n
  Variable deviation;         // Y_n = (M_n - E_sup(M_n)) / n
  double expectation_of_max;  // E_sup(M_n)
};

NormalizedDeviation normalized_deviation(std::span<const Variable> xs, const PossibilityDistribution& dist,
                                         std::size_t n);

/// (E_sup(M_n), max_{k<=n} E_sup(X_k)); the two agree for every input.
InequalitySides max_expectation_identity(std::span<const Variable> xs, const PossibilityDistribution& dist,
                                         std::size_t n);

}  // namespace possib
