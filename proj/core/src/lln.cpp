#include "possib/lln.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "possib/error.hpp"
#include "possib/moments.hpp"
#include "possib/tolerance.hpp"

namespace possib {
namespace {

// Tail exponent above which a decreasing term sequence is read as summable.
constexpr double kSummableExponent = 1.05;
// Tail exponent at or below which the series is read as divergent.
constexpr double kDivergentExponent = 0.95;
// Power-law growth of a running sup over the tail window at or above which
// the sup is read as unbounded.
constexpr double kUnboundedGrowthExponent = 0.05;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require_delta(double delta, std::string_view context) {
  if (!(delta > 0.0 && delta < 2.0)) throw DomainError(std::string(context) + ": delta must lie in (0, 2)");
}

void require_horizon(const Scenario& s, std::size_t horizon) {
  if (horizon == 0) throw StructuralError("horizon must be at least 1");
  if (auto top = max_index(s.generator); top && horizon > *top) {
    throw StructuralError("horizon " + std::to_string(horizon) + " exceeds the explicit table (" +
                          std::to_string(*top) + " rows)");
  }
}

std::vector<double> running_max(std::span<const double> xs) {
  std::vector<double> out(xs.begin(), xs.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  return out;
}

// A non-decreasing sequence r_1..r_N has stabilized when its increase across
// the tail window is below kStabilization relative to its final value.
bool stabilized(std::span<const double> running) {
  const std::size_t horizon = running.size();
  const double last = running.back();
  if (last == 0.0) return true;
  const std::size_t from = tol::tail_window_start(horizon);
  if (from <= 1) return false;
  return (last - running[from - 2]) <= tol::kStabilization * std::abs(last);
}

// Fitted exponent q of running[N] / running[from] = (N / from)^q over the
// tail window; nullopt when the window is too short or the sup is zero there.
std::optional<double> tail_growth_exponent(std::span<const double> running) {
  const std::size_t horizon = running.size();
  const std::size_t from = tol::tail_window_start(horizon);
  if (from <= 1 || from >= horizon || !(running[from - 1] > 0.0)) return std::nullopt;
  return std::log(running.back() / running[from - 1]) /
         std::log(static_cast<double>(horizon) / static_cast<double>(from));
}

// Shared verdict for an inferred constant: stable sup -> yes, sustained
// power-law growth -> no, otherwise undecided.
void judge_inferred(HypothesisReport& r, std::span<const double> sup, const std::string& what) {
  if (stabilized(sup)) {
    r.satisfied = Satisfied::kYes;
    r.notes.push_back(what + " is stable at C=" + fmt(r.constant));
    return;
  }
  const auto q = tail_growth_exponent(sup);
  if (q && *q >= kUnboundedGrowthExponent) {
    r.satisfied = Satisfied::kNo;
    r.notes.push_back(what + " grows like n^" + fmt(*q) + " over the tail window; no finite C");
    return;
  }
  r.notes.push_back(what + " is still growing at the horizon (currently " + fmt(r.constant) + ")");
}

}  // namespace

const char* to_string(Satisfied s) noexcept {
  switch (s) {
    case Satisfied::kYes: return "yes";
    case Satisfied::kNo: return "no";
    case Satisfied::kUndecided: break;
  }
  return "undecided";
}

const char* to_string(HypothesisGate gate) noexcept {
  switch (gate) {
    case HypothesisGate::kSatisfied: return "satisfied";
    case HypothesisGate::kOverridden: return "overridden";
    case HypothesisGate::kRejected: break;
  }
  return "rejected";
}

std::vector<double> term_variances(const Scenario& scenario, std::size_t horizon) {
  require_horizon(scenario, horizon);
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) out.push_back(variance_sup(scenario.variable(k), scenario.distribution));
  return out;
}

HypothesisReport check_psi_condition(std::span<const double> variances, const PsiFunction& psi,
                                     std::optional<double> constant, bool per_term_route) {
  if (variances.empty()) throw StructuralError("check_psi_condition: empty horizon");
  if (constant && !(*constant >= 0.0)) throw DomainError("check_psi_condition: C must be non-negative");
  const std::size_t horizon = variances.size();

  HypothesisReport r;
  r.theorem = Theorem::kPsiCondition;
  r.horizon = horizon;
  const auto rm = running_max(variances);
  std::vector<double> psi_values(horizon), rate(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    psi_values[n - 1] = psi(n);
    const double nn = static_cast<double>(n);
    rate[n - 1] = nn * nn / psi_values[n - 1];
  }

  if (constant) {
    r.constant = *constant;
    r.constant_inferred = false;
    r.satisfied = Satisfied::kYes;
    for (std::size_t n = 1; n <= horizon; ++n) {
      const double margin = r.constant * rate[n - 1] - rm[n - 1];
      r.margins.push_back(margin);
      if (margin < -tol::kBound * std::max(1.0, rm[n - 1]) && r.satisfied == Satisfied::kYes) {
        r.satisfied = Satisfied::kNo;
        r.notes.push_back("running max variance exceeds C*n^2/psi(n) first at n=" + std::to_string(n));
      }
    }
  } else {
    std::vector<double> sup(horizon);
    for (std::size_t n = 1; n <= horizon; ++n) sup[n - 1] = rm[n - 1] / rate[n - 1];
    sup = running_max(sup);
    r.constant = sup.back();
    for (std::size_t n = 1; n <= horizon; ++n) r.margins.push_back(r.constant * rate[n - 1] - rm[n - 1]);
    judge_inferred(r, sup, "sup of max_k Var_sup(X_k) * psi(n) / n^2");
  }

  // psi must tend to infinity; on a horizon that reads as psi(N) exceeding
  // every value seen before the tail window.
  const std::size_t from = tol::tail_window_start(horizon);
  bool grows = from > 1;
  for (std::size_t n = 1; n < from && grows; ++n) grows = psi_values[horizon - 1] > psi_values[n - 1];
  if (!grows) {
    r.notes.push_back("psi(n) shows no growth toward infinity over the horizon");
    if (r.satisfied == Satisfied::kYes) r.satisfied = Satisfied::kUndecided;
  }

  if (per_term_route) {
    double c = 0.0;
    if (constant) {
      c = *constant;
    } else {
      for (std::size_t k = 0; k < horizon; ++k) c = std::max(c, variances[k] / rate[k]);
    }
    bool per_term = true;
    for (std::size_t k = 0; k < horizon && per_term; ++k)
      per_term = variances[k] <= c * rate[k] + tol::kBound * std::max(1.0, variances[k]);
    bool monotone_rate = true;
    for (std::size_t n = 1; n < horizon && monotone_rate; ++n) monotone_rate = rate[n] >= rate[n - 1];
    r.per_term_route = per_term && monotone_rate;
    r.notes.push_back(std::string("per-term bound ") + (per_term ? "holds" : "fails") + ", n^2/psi(n) " +
                      (monotone_rate ? "non-decreasing" : "not monotone"));
  }
  return r;
}

HypothesisReport check_psi_condition(const Scenario& scenario, const PsiFunction& psi,
                                     std::optional<double> constant, std::size_t horizon, bool per_term_route) {
  return check_psi_condition(term_variances(scenario, horizon), psi, constant, per_term_route);
}

HypothesisReport check_running_sup_power(std::span<const double> variances, double delta) {
  require_delta(delta, "check_running_sup_power");
  if (variances.empty()) throw StructuralError("check_running_sup_power: empty horizon");
  const std::size_t horizon = variances.size();
  HypothesisReport r;
  r.theorem = Theorem::kRunningSupPower;
  r.horizon = horizon;
  const auto rm = running_max(variances);
  std::vector<double> sup(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) sup[n - 1] = rm[n - 1] / std::pow(static_cast<double>(n), delta);
  sup = running_max(sup);
  r.constant = sup.back();
  for (std::size_t n = 1; n <= horizon; ++n)
    r.margins.push_back(r.constant * std::pow(static_cast<double>(n), delta) - rm[n - 1]);
  judge_inferred(r, sup, "sup of n^-delta * max_k Var_sup(X_k)");
  return r;
}

HypothesisReport check_running_sup_power(const Scenario& scenario, double delta, std::size_t horizon) {
  require_delta(delta, "check_running_sup_power");
  return check_running_sup_power(term_variances(scenario, horizon), delta);
}

HypothesisReport check_series(std::span<const double> variances, double delta) {
  require_delta(delta, "check_series");
  if (variances.empty()) throw StructuralError("check_series: empty horizon");
  const std::size_t horizon = variances.size();
  HypothesisReport r;
  r.theorem = Theorem::kSeries;
  r.horizon = horizon;

  std::vector<double> terms(horizon);
  double sum = 0.0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    terms[k - 1] = variances[k - 1] / std::pow(static_cast<double>(k), delta);
    sum += terms[k - 1];
    r.partial_sums.push_back(sum);
    r.constant = std::max(r.constant, terms[k - 1]);
  }
  for (double a : terms) r.margins.push_back(r.constant - a);

  const std::size_t from = tol::tail_window_start(horizon);
  const double tail_increment = from > 1 ? sum - r.partial_sums[from - 2] : sum;
  if (sum == 0.0) {
    r.satisfied = Satisfied::kYes;
    r.notes.push_back("all terms vanish; the series sums to 0");
    return r;
  }
  if (from > 1 && tail_increment <= tol::kStabilization * sum) {
    r.satisfied = Satisfied::kYes;
    r.notes.push_back("partial sums stable over the tail window at " + fmt(sum));
    return r;
  }

  // Decreasing tail decaying faster than a harmonic p-series.
  const double first = terms[from - 1];
  const double last = terms[horizon - 1];
  bool decreasing = from < horizon && first > 0.0 && last > 0.0;
  for (std::size_t k = from; k < horizon && decreasing; ++k) decreasing = terms[k] <= terms[k - 1];
  if (decreasing) {
    const double p = std::log(first / last) / std::log(static_cast<double>(horizon) / static_cast<double>(from));
    if (p >= kSummableExponent) {
      const double remainder = last * static_cast<double>(horizon) / (p - 1.0);
      r.satisfied = Satisfied::kYes;
      r.notes.push_back("tail terms decay like k^-" + fmt(p) + "; partial sum " + fmt(sum) +
                        " with estimated remainder " + fmt(remainder));
      return r;
    }
    if (p <= kDivergentExponent) {
      r.satisfied = Satisfied::kNo;
      r.notes.push_back("tail terms decay like k^-" + fmt(p) + "; the partial sums diverge");
      return r;
    }
    r.notes.push_back("tail terms decay like k^-" + fmt(p) + ", too slowly to certify a finite sum");
  } else {
    bool nondecreasing = from < horizon && first > 0.0;
    for (std::size_t k = from; k < horizon && nondecreasing; ++k) nondecreasing = terms[k] >= terms[k - 1];
    if (nondecreasing) {
      r.satisfied = Satisfied::kNo;
      r.notes.push_back("tail terms do not decrease; the partial sums diverge");
      return r;
    }
    r.notes.push_back("tail terms are not decreasing");
  }
  r.notes.push_back("partial sum " + fmt(sum) + " is only a lower bound for the series");
  return r;
}

HypothesisReport check_series(const Scenario& scenario, double delta, std::size_t horizon) {
  require_delta(delta, "check_series");
  return check_series(term_variances(scenario, horizon), delta);
}

namespace {

LinearExpectationRemark remark_from(std::span<const double> expectations, std::span<const double> minima) {
  LinearExpectationRemark out;
  out.mu = expectations.front();
  out.nonnegative = std::all_of(minima.begin(), minima.end(), [](double m) { return m >= 0.0; });
  out.proportional = true;
  for (std::size_t k = 1; k <= expectations.size() && out.proportional; ++k) {
    const double target = static_cast<double>(k) * out.mu;
    out.proportional = std::abs(expectations[k - 1] - target) <= tol::kIdentity * std::max(1.0, std::abs(target));
  }
  return out;
}

}  // namespace

LinearExpectationRemark check_linear_expectation_remark(const Scenario& scenario, std::size_t horizon) {
  require_horizon(scenario, horizon);
  std::vector<double> expectations, minima;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const Variable x = scenario.variable(k);
    expectations.push_back(expectation_sup(x, scenario.distribution));
    minima.push_back(*std::min_element(x.values().begin(), x.values().end()));
  }
  return remark_from(expectations, minima);
}

MaxTrajectory compute_max_trajectory(const Scenario& scenario, std::size_t horizon) {
  require_horizon(scenario, horizon);
  const auto& dist = scenario.distribution;
  const std::size_t size = scenario.space->size();

  MaxTrajectory t;
  t.maxima.reserve(horizon);
  t.averages.reserve(horizon);
  t.deviations.reserve(horizon);

  std::vector<double> running(size, 0.0);
  double max_var = 0.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Variable x = scenario.variable(n);
    for (std::size_t i = 0; i < size; ++i) running[i] = n == 1 ? x[i] : std::max(running[i], x[i]);
    Variable m(scenario.space, running);
    const double e = expectation_sup(m, dist);
    const double scale = static_cast<double>(n);
    std::vector<double> avg(size), dev(size);
    for (std::size_t i = 0; i < size; ++i) {
      avg[i] = running[i] / scale;
      dev[i] = (running[i] - e) / scale;
    }
    Variable a(scenario.space, std::move(avg));
    const double var_x = variance_sup(x, dist);
    max_var = n == 1 ? var_x : std::max(max_var, var_x);

    t.average_variance.push_back(variance_sup(a, dist));
    t.expectation_of_max.push_back(e);
    t.term_expectation.push_back(expectation_sup(x, dist));
    t.term_variance.push_back(var_x);
    t.running_max_variance.push_back(max_var);
    t.term_minimum.push_back(*std::min_element(x.values().begin(), x.values().end()));
    t.maxima.push_back(std::move(m));
    t.averages.push_back(std::move(a));
    t.deviations.emplace_back(scenario.space, std::move(dev));
  }
  return t;
}

SequenceSample deviation_sample(const Scenario& scenario, const MaxTrajectory& trajectory) {
  SequenceSample s{trajectory.deviations, std::nullopt};
  const std::size_t size = scenario.space->size();
  if (auto lim = average_limit(scenario.generator, size)) {
    // E_sup(M_n)/n tends to max_s lambda(s) * lim(M_n(s)/n).
    double e = 0.0;
    for (std::size_t i = 0; i < size; ++i) e = std::max(e, (*lim)[i] * scenario.distribution[i]);
    std::vector<std::optional<double>> limits(size);
    for (std::size_t i = 0; i < size; ++i) limits[i] = (*lim)[i] - e;
    s.limits = std::move(limits);
  }
  return s;
}

SequenceSample average_sample(const Scenario& scenario, const MaxTrajectory& trajectory) {
  SequenceSample s{trajectory.averages, std::nullopt};
  if (auto lim = average_limit(scenario.generator, scenario.space->size()))
    s.limits = std::vector<std::optional<double>>(lim->begin(), lim->end());
  return s;
}

TheoremParams theorem_params(const Scenario& scenario) {
  const auto& l = scenario.lln;
  if (!l.theorem) throw DomainError("scenario does not select a theorem (lln.theorem)");
  TheoremParams p;
  p.theorem = *l.theorem;
  p.psi = l.psi;
  p.delta = l.delta;
  p.constant = l.constant;
  if (p.theorem == Theorem::kPsiCondition && !p.psi) throw DomainError("lln.theorem \"3.3\" needs lln.psi");
  if (p.theorem != Theorem::kPsiCondition && !p.delta)
    throw DomainError("lln.theorem \"" + std::string(to_string(p.theorem)) + "\" needs lln.delta");
  return p;
}

LLNReport run_lln(const Scenario& scenario, const TheoremParams& params, std::size_t horizon,
                  std::span<const double> eps_grid, bool force) {
  if (eps_grid.empty()) throw DomainError("run_lln: epsilon grid is empty");
  for (double e : eps_grid)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("run_lln: eps must be positive");

  const MaxTrajectory traj = compute_max_trajectory(scenario, horizon);
  const auto& dist = scenario.distribution;

  LLNReport out;
  out.horizon = horizon;
  switch (params.theorem) {
    case Theorem::kPsiCondition:
      if (!params.psi) throw DomainError("run_lln: the psi condition needs a psi function");
      out.hypothesis = check_psi_condition(traj.term_variance, *params.psi, params.constant, params.per_term_route);
      break;
    case Theorem::kRunningSupPower:
      if (!params.delta) throw DomainError("run_lln: the running-sup condition needs delta");
      out.hypothesis = check_running_sup_power(traj.term_variance, *params.delta);
      break;
    case Theorem::kSeries:
      if (!params.delta) throw DomainError("run_lln: the series condition needs delta");
      out.hypothesis = check_series(traj.term_variance, *params.delta);
      break;
  }
  if (out.hypothesis.satisfied == Satisfied::kYes) {
    out.gate = HypothesisGate::kSatisfied;
  } else {
    out.gate = force ? HypothesisGate::kOverridden : HypothesisGate::kRejected;
  }

  const double c = out.hypothesis.constant;
  auto rate = [&](std::size_t n) {
    if (params.theorem == Theorem::kPsiCondition) return (*params.psi)(n);
    return std::pow(static_cast<double>(n), 2.0 - *params.delta);
  };

  std::vector<double> rates(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    rates[n - 1] = rate(n);
    const double nn = static_cast<double>(n);
    const double bound = c / rates[n - 1];
    const double var_a = traj.average_variance[n - 1];
    out.average_variance.push_back(var_a);
    out.variance_bound.push_back(bound);
    if (var_a > traj.running_max_variance[n - 1] / (nn * nn) + tol::kIdentity || var_a > bound + tol::kIdentity)
      out.variance_contraction_ok = false;
  }

  const Variable zero = Variable::constant(scenario.space, 0.0);
  for (double eps : eps_grid) {
    EpsilonCurve curve;
    curve.eps = eps;
    curve.measured.reserve(horizon);
    curve.bound.reserve(horizon);
    for (std::size_t n = 1; n <= horizon; ++n) {
      const double measured = induced_measure(dist, deviation_event(traj.deviations[n - 1], zero, eps));
      const double bound = c / (rates[n - 1] * eps * eps);
      curve.measured.push_back(measured);
      curve.bound.push_back(bound);
      if (measured > bound + tol::kBound) curve.respected = false;
    }
    out.bounds_respected = out.bounds_respected && curve.respected;
    out.curves.push_back(std::move(curve));
  }

  for (std::size_t i = 0; i < scenario.space->size(); ++i) {
    if (!(dist[i] > 0.0)) continue;
    out.positive_outcomes.push_back(i);
    std::vector<double> path;
    path.reserve(horizon);
    for (const auto& y : traj.deviations) path.push_back(y[i]);
    out.deviation_paths.push_back(std::move(path));
  }

  ConvergenceOptions options;
  options.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  const SequenceSample ys = deviation_sample(scenario, traj);
  out.in_measure = converges_in_measure(ys, zero, dist, options);
  out.almost_everywhere = converges_ae(ys, zero, dist, options);

  out.remark = remark_from(traj.term_expectation, traj.term_minimum);
  if (out.remark.satisfied()) {
    const SequenceSample avg = average_sample(scenario, traj);
    const Variable mu = Variable::constant(scenario.space, out.remark.mu);
    out.mean_verdict = converges_ae(avg, mu, dist, options);
  }
  return out;
}

}  // namespace possib
