#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace possib {

/// Rate function Psi(n) of the running-max variance condition.
///   power:     scale * n^delta
///   log-power: scale * (ln(n + 1))^delta
///   table:     values[n - 1]
class PsiFunction {
 public:
  enum class Family { kPower, kLogPower, kTable };

  static PsiFunction power(double delta, double scale = 1.0);
  static PsiFunction log_power(double delta, double scale = 1.0);
  static PsiFunction table(std::vector<double> values);

  Family family() const noexcept { return family_; }
  double delta() const noexcept { return delta_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Throws DomainError for n == 0 or n past the table, ValidationError if the
  /// result is not a positive finite number.
  double operator()(std::size_t n) const;

  bool operator==(const PsiFunction&) const = default;

 private:
  PsiFunction(Family family, double delta, double scale, std::vector<double> values);

  Family family_;
  double delta_;
  double scale_;
  std::vector<double> values_;
};

std::string_view to_string(PsiFunction::Family family) noexcept;
PsiFunction::Family parse_psi_family(std::string_view name);

enum class Theorem { kPsiCondition, kRunningSupPower, kSeries };

/// "3.3", "3.4", "3.5".
std::string_view to_string(Theorem theorem) noexcept;
Theorem parse_theorem(std::string_view id);

}  // namespace possib
