#include "possib/psi.hpp"

#include <cmath>
#include <string>

#include "possib/error.hpp"

namespace possib {

PsiFunction::PsiFunction(Family family, double delta, double scale, std::vector<double> values)
    : family_(family), delta_(delta), scale_(scale), values_(std::move(values)) {}

PsiFunction PsiFunction::power(double delta, double scale) {
  if (!std::isfinite(delta)) throw ValidationError("psi: delta must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("psi: scale must be positive");
  return PsiFunction(Family::kPower, delta, scale, {});
}

PsiFunction PsiFunction::log_power(double delta, double scale) {
  if (!std::isfinite(delta)) throw ValidationError("psi: delta must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("psi: scale must be positive");
  return PsiFunction(Family::kLogPower, delta, scale, {});
}

PsiFunction PsiFunction::table(std::vector<double> values) {
  if (values.empty()) throw ValidationError("psi: table is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("psi: table values must be positive and finite");
  return PsiFunction(Family::kTable, 0.0, 1.0, std::move(values));
}

double PsiFunction::operator()(std::size_t n) const {
  if (n == 0) throw DomainError("psi: n must be at least 1");
  double v = 0.0;
  switch (family_) {
    case Family::kPower:
      v = scale_ * std::pow(static_cast<double>(n), delta_);
      break;
    case Family::kLogPower:
      v = scale_ * std::pow(std::log(static_cast<double>(n) + 1.0), delta_);
      break;
    case Family::kTable:
      if (n > values_.size()) {
        throw DomainError("psi: table covers n <= " + std::to_string(values_.size()) + ", asked for " +
                          std::to_string(n));
      }
      v = values_[n - 1];
      break;
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError("psi(" + std::to_string(n) + ") is not a positive finite number");
  }
  return v;
}

std::string_view to_string(PsiFunction::Family family) noexcept {
  switch (family) {
    case PsiFunction::Family::kPower: return "power";
    case PsiFunction::Family::kLogPower: return "log-power";
    case PsiFunction::Family::kTable: break;
  }
  return "table";
}

PsiFunction::Family parse_psi_family(std::string_view name) {
  if (name == "power") return PsiFunction::Family::kPower;
  if (name == "log-power") return PsiFunction::Family::kLogPower;
  if (name == "table") return PsiFunction::Family::kTable;
  throw DomainError("unknown psi family '" + std::string(name) + "' (expected power, log-power or table)");
}

std::string_view to_string(Theorem theorem) noexcept {
  switch (theorem) {
    case Theorem::kPsiCondition: return "3.3";
    case Theorem::kRunningSupPower: return "3.4";
    case Theorem::kSeries: break;
  }
  return "3.5";
}

Theorem parse_theorem(std::string_view id) {
  if (id == "3.3") return Theorem::kPsiCondition;
  if (id == "3.4") return Theorem::kRunningSupPower;
  if (id == "3.5") return Theorem::kSeries;
  throw DomainError("unknown theorem '" + std::string(id) + "' (expected 3.3, 3.4 or 3.5)");
}

}  // namespace possib
