#pragma once

// Brute-force reference for the sup-based moments and the induced measure.
// Works on plain vectors and re-derives every quantity with its own loops so
// that it shares no code path with the library it checks.

#include <cstddef>
#include <string>
#include <vector>

#include "possib/scenario.hpp"

namespace possib::oracle {

struct Moments {
  double expectation;
  double variance;
};

Moments moments(const std::vector<double>& values, const std::vector<double>& weights);
double measure(const std::vector<double>& weights, const std::vector<bool>& members);
double measure(const Scenario& scenario, const std::vector<std::string>& labels);

/// (E_sup, Var_sup) of X_k read off the scenario's generator.
Moments moments(const Scenario& scenario, std::size_t k);

/// Pointwise maximum of rows[0..n).
std::vector<double> pointwise_max(const std::vector<std::vector<double>>& rows, std::size_t n);

/// sum_{k<=n} c * k^-p accumulated in long double.
long double power_series(double c, double p, std::size_t n);

}  // namespace possib::oracle
