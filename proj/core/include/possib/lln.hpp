#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "possib/convergence.hpp"
#include "possib/psi.hpp"
#include "possib/scenario.hpp"

namespace possib {

enum class Satisfied { kYes, kNo, kUndecided };
const char* to_string(Satisfied s) noexcept;

struct HypothesisReport {
  Theorem theorem = Theorem::kPsiCondition;
  std::size_t horizon = 0;
  Satisfied satisfied = Satisfied::kUndecided;
  double constant = 0.0;          // C, supplied or inferred
  bool constant_inferred = true;
  std::vector<double> margins;    // per n; >= 0 where the condition holds
  std::vector<double> partial_sums;  // series condition only
  std::optional<bool> per_term_route;  // running-max condition via per-k bound
  std::vector<std::string> notes;
};

/// Var_sup(X_k) for k = 1..N.
std::vector<double> term_variances(const Scenario& scenario, std::size_t horizon);

/// max_{k<=n} Var_sup(X_k) <= C * n^2 / Psi(n). With no C the smallest C that
/// fits the horizon is inferred and accepted once it has stabilized over the
/// tail window. `per_term_route` additionally checks the sufficient condition
/// Var_sup(X_k) <= C * k^2 / Psi(k) with n^2/Psi(n) non-decreasing.
HypothesisReport check_psi_condition(std::span<const double> variances, const PsiFunction& psi,
                                     std::optional<double> constant, bool per_term_route = false);
HypothesisReport check_psi_condition(const Scenario& scenario, const PsiFunction& psi,
                                     std::optional<double> constant, std::size_t horizon,
                                     bool per_term_route = false);

/// sup_n n^-delta * max_{k<=n} Var_sup(X_k) = C < inf, for delta in (0, 2).
HypothesisReport check_running_sup_power(std::span<const double> variances, double delta);
HypothesisReport check_running_sup_power(const Scenario& scenario, double delta, std::size_t horizon);

/// sum_k Var_sup(X_k) / k^delta < inf, for delta in (0, 2). The inferred C is
/// max_k Var_sup(X_k) / k^delta.
HypothesisReport check_series(std::span<const double> variances, double delta);
HypothesisReport check_series(const Scenario& scenario, double delta, std::size_t horizon);

struct LinearExpectationRemark {
  double mu = 0.0;  // E_sup(X_1)
  bool nonnegative = false;
  bool proportional = false;  // E_sup(X_k) = k * mu for every k on the horizon
  bool satisfied() const noexcept { return nonnegative && proportional; }
};

LinearExpectationRemark check_linear_expectation_remark(const Scenario& scenario, std::size_t horizon);

/// Everything the max-based laws of large numbers talk about, for n = 1..N.
struct MaxTrajectory {
  std::vector<Variable> maxima;        // M_n
  std::vector<Variable> averages;      // A_n = M_n / n
  std::vector<Variable> deviations;    // Y_n
  std::vector<double> expectation_of_max;  // E_sup(M_n)
  std::vector<double> average_variance;    // Var_sup(A_n)
  std::vector<double> term_expectation;    // E_sup(X_n)
  std::vector<double> term_variance;       // Var_sup(X_n)
  std::vector<double> running_max_variance;  // max_{k<=n} Var_sup(X_k)
  std::vector<double> term_minimum;          // min_s X_n(s)
};

MaxTrajectory compute_max_trajectory(const Scenario& scenario, std::size_t horizon);

/// Y_n together with its analytic limit when the generator has one.
SequenceSample deviation_sample(const Scenario& scenario, const MaxTrajectory& trajectory);
/// A_n = M_n / n together with its analytic limit when the generator has one.
SequenceSample average_sample(const Scenario& scenario, const MaxTrajectory& trajectory);

struct TheoremParams {
  Theorem theorem = Theorem::kPsiCondition;
  std::optional<PsiFunction> psi;
  std::optional<double> delta;
  std::optional<double> constant;
  bool per_term_route = false;
};

/// Reads the lln block of a scenario. Throws DomainError if a required
/// parameter is missing.
TheoremParams theorem_params(const Scenario& scenario);

struct EpsilonCurve {
  double eps = 0.0;
  std::vector<double> measured;  // P_lambda(|Y_n| >= eps)
  std::vector<double> bound;     // C / (rate(n) * eps^2)
  bool respected = true;
};

enum class HypothesisGate { kSatisfied, kOverridden, kRejected };
const char* to_string(HypothesisGate gate) noexcept;

struct LLNReport {
  HypothesisReport hypothesis;
  HypothesisGate gate = HypothesisGate::kRejected;
  std::size_t horizon = 0;
  std::vector<std::size_t> positive_outcomes;        // lambda > 0
  std::vector<std::vector<double>> deviation_paths;  // Y_n per positive outcome
  std::vector<double> average_variance;              // Var_sup(A_n)
  std::vector<double> variance_bound;                // C / rate(n)
  bool variance_contraction_ok = true;
  std::vector<EpsilonCurve> curves;
  bool bounds_respected = true;
  ConvergenceVerdict in_measure;
  ConvergenceVerdict almost_everywhere;
  LinearExpectationRemark remark;
  std::optional<ConvergenceVerdict> mean_verdict;  // M_n/n -> mu, when the remark applies
};

/// Hypothesis check, Chebyshev curves, and convergence verdicts for Y_n -> 0.
LLNReport run_lln(const Scenario& scenario, const TheoremParams& params, std::size_t horizon,
                  std::span<const double> eps_grid, bool force = false);

}  // namespace possib
