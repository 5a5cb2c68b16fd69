#pragma once

#include <cstddef>

namespace possib::tol {

// Absolute tolerance for identities built from max, products and differences.
inline constexpr double kIdentity = 1e-9;
// Slack allowed when a measured value is compared with an analytic bound.
inline constexpr double kBound = 1e-12;
// A measure trajectory counts as vanished once it is at or below this.
inline constexpr double kDecay = 1e-9;
// Per-outcome Cauchy window tolerance for trajectory values.
inline constexpr double kCauchy = 1e-6;
// Relative increment under which a running sup or partial sum is "stable".
inline constexpr double kStabilization = 1e-6;
// Fraction of the horizon used as the tail window.
inline constexpr double kTailFraction = 0.1;

/// First index (1-based) of the tail window of a horizon N: the last
/// ceil(N * kTailFraction) indices, never empty.
constexpr std::size_t tail_window_start(std::size_t horizon) noexcept {
  if (horizon == 0) return 1;
  const double raw = static_cast<double>(horizon) * kTailFraction;
  std::size_t len = static_cast<std::size_t>(raw);
  if (static_cast<double>(len) < raw) ++len;
  if (len == 0) len = 1;
  return horizon - len + 1;
}

}  // namespace possib::tol
