#include "possib/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "possib/error.hpp"
#include "possib/moments.hpp"

namespace possib {
namespace {

void require_eps(double eps, std::string_view context) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError(std::string(context) + ": eps must be a positive finite number");
  }
}

void require_sequence(const SequenceSample& seq, const Variable& limit, const PossibilityDistribution& dist,
                      std::string_view context) {
  if (seq.terms.empty()) throw StructuralError(std::string(context) + ": sequence has no terms");
  require_same_space(limit.space(), dist.space(), context);
  for (const auto& t : seq.terms) require_same_space(t.space(), limit.space(), context);
  if (seq.limits && seq.limits->size() != limit.size()) {
    throw StructuralError(std::string(context) + ": analytic limits do not match the sample space");
  }
}

void require_grid(const std::vector<double>& grid, std::string_view context) {
  if (grid.empty()) throw DomainError(std::string(context) + ": epsilon grid is empty");
  for (double e : grid) require_eps(e, context);
}

double deviation(const SequenceSample& seq, const Variable& limit, std::size_t n, std::size_t i) {
  return seq.terms[n - 1][i] - limit[i];
}

// Outcome i sits in B_n(eps) at every n of the tail window and its deviation
// is not shrinking from the start of the window to the horizon.
bool persists(const SequenceSample& seq, const Variable& limit, std::size_t i, double eps, std::size_t from) {
  const std::size_t horizon = seq.horizon();
  for (std::size_t n = from; n <= horizon; ++n)
    if (!(std::abs(deviation(seq, limit, n, i)) >= eps)) return false;
  return std::abs(deviation(seq, limit, horizon, i)) >= std::abs(deviation(seq, limit, from, i));
}

// Exact decision from analytic limits: on a finite space both modes of
// convergence hold iff every outcome of positive weight converges to the limit.
void decide_analytically(ConvergenceVerdict& verdict, const SequenceSample& seq, const Variable& limit,
                         const PossibilityDistribution& dist) {
  verdict.exact = true;
  const auto& limits = *seq.limits;
  for (std::size_t i = 0; i < limit.size(); ++i) {
    if (!(dist[i] > 0.0)) continue;
    const bool converges = limits[i].has_value() && std::abs(*limits[i] - limit[i]) <= tol::kIdentity;
    if (!converges) {
      verdict.decided = Decision::kFails;
      verdict.witness = Witness{i, seq.horizon(), deviation(seq, limit, seq.horizon(), i)};
      verdict.note = limits[i] ? "analytic limit differs from target at an outcome of positive weight"
                               : "no pointwise limit at an outcome of positive weight";
      return;
    }
  }
  verdict.decided = Decision::kHolds;
  verdict.note = "decided from analytic pointwise limits";
}

}  // namespace

EventTrajectory::EventTrajectory(SpaceRef space, std::vector<Event> events)
    : space_(std::move(space)), events_(std::move(events)) {
  if (events_.empty()) throw StructuralError("event trajectory needs at least one event");
  for (const auto& e : events_) require_same_space(space_, e.space(), "event trajectory");
}

const Event& EventTrajectory::at(std::size_t n) const {
  if (n == 0 || n > events_.size()) throw StructuralError("event trajectory index out of range");
  return events_[n - 1];
}

const char* to_string(ConvergenceKind kind) noexcept {
  return kind == ConvergenceKind::kInMeasure ? "in-measure" : "almost-everywhere";
}

const char* to_string(Decision decision) noexcept {
  switch (decision) {
    case Decision::kHolds: return "holds";
    case Decision::kFails: return "fails";
    case Decision::kUndecided: break;
  }
  return "undecided";
}

Event deviation_event(const Variable& y, const Variable& limit, double eps) {
  require_eps(eps, "deviation_event");
  require_same_space(y.space(), limit.space(), "deviation_event");
  std::vector<bool> mask(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) mask[i] = std::abs(y[i] - limit[i]) >= eps;
  return Event(y.space(), std::move(mask));
}

EventTrajectory deviation_trajectory(std::span<const Variable> terms, const Variable& limit, double eps) {
  std::vector<Event> events;
  events.reserve(terms.size());
  for (const auto& t : terms) events.push_back(deviation_event(t, limit, eps));
  return EventTrajectory(limit.space(), std::move(events));
}

std::vector<double> measure_trajectory(const EventTrajectory& trajectory, const PossibilityDistribution& dist) {
  require_same_space(trajectory.space(), dist.space(), "measure_trajectory");
  std::vector<double> out;
  out.reserve(trajectory.horizon());
  for (const auto& e : trajectory.events()) out.push_back(induced_measure(dist, e));
  return out;
}

double tail_sup(std::span<const double> values, std::size_t m) {
  if (m == 0 || m > values.size()) {
    throw StructuralError("tail_sup: m=" + std::to_string(m) + " outside [1, " + std::to_string(values.size()) + "]");
  }
  return *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(m - 1), values.end());
}

std::vector<double> tail_sup_sequence(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t i = out.size(); i-- > 1;) out[i - 1] = std::max(out[i - 1], out[i]);
  return out;
}

Event limsup_event(const EventTrajectory& trajectory, std::size_t m) {
  if (m == 0 || m > trajectory.horizon()) throw StructuralError("limsup_event: window start outside the horizon");
  Event out = Event::none(trajectory.space());
  for (std::size_t n = m; n <= trajectory.horizon(); ++n) out |= trajectory.at(n);
  return out;
}

std::vector<Event> limsup_events(const EventTrajectory& trajectory) {
  std::vector<Event> out(trajectory.events().begin(), trajectory.events().end());
  for (std::size_t i = out.size(); i-- > 1;) out[i - 1] |= out[i];
  return out;
}

BorelCantelliReport borel_cantelli_check(const EventTrajectory& trajectory, const PossibilityDistribution& dist,
                                         double decay_tol) {
  if (trajectory.horizon() < 2) throw StructuralError("borel_cantelli_check: horizon must be at least 2");
  const auto measures = measure_trajectory(trajectory, dist);
  const auto sups = tail_sup_sequence(measures);
  const auto unions = limsup_events(trajectory);

  BorelCantelliReport report;
  report.rows.reserve(measures.size());
  for (std::size_t m = 1; m <= measures.size(); ++m) {
    const double lim = induced_measure(dist, unions[m - 1]);
    report.rows.push_back({m, lim, sups[m - 1]});
    if (!(lim <= sups[m - 1])) report.inequality_holds = false;
    if (!report.vanish_index && sups[m - 1] <= decay_tol) report.vanish_index = m;
  }
  report.vanishes = report.vanish_index ? Decision::kHolds : Decision::kUndecided;
  return report;
}

ConvergenceVerdict converges_in_measure(const SequenceSample& sequence, const Variable& limit,
                                        const PossibilityDistribution& dist, const ConvergenceOptions& options) {
  require_sequence(sequence, limit, dist, "converges_in_measure");
  require_grid(options.eps_grid, "converges_in_measure");

  const std::size_t horizon = sequence.horizon();
  const std::size_t from = tol::tail_window_start(horizon);

  ConvergenceVerdict verdict;
  verdict.kind = ConvergenceKind::kInMeasure;
  verdict.horizon = horizon;
  verdict.eps_grid = options.eps_grid;

  std::optional<Witness> first_failure;
  bool all_hold = true;
  for (double eps : options.eps_grid) {
    const auto measures = measure_trajectory(deviation_trajectory(sequence.terms, limit, eps), dist);
    EpsilonEvidence ev{eps, tail_sup(measures, from), std::nullopt, Decision::kUndecided};
    if (measures.back() <= options.decay_tol) {
      std::size_t n0 = horizon;
      while (n0 > 1 && measures[n0 - 2] <= options.decay_tol) --n0;
      ev.settles_at = n0;
    }
    if (ev.tail_max <= options.decay_tol) {
      ev.decided = Decision::kHolds;
    } else {
      all_hold = false;
      for (std::size_t i = 0; i < limit.size(); ++i) {
        if (dist[i] > options.decay_tol && persists(sequence, limit, i, eps, from)) {
          ev.decided = Decision::kFails;
          if (!first_failure) first_failure = Witness{i, horizon, deviation(sequence, limit, horizon, i)};
          break;
        }
      }
    }
    verdict.evidence.push_back(ev);
  }

  if (sequence.limits) {
    decide_analytically(verdict, sequence, limit, dist);
  } else if (first_failure) {
    verdict.decided = Decision::kFails;
    verdict.witness = first_failure;
    verdict.note = "an outcome of positive weight stays in the deviation event across the tail window";
  } else if (all_hold) {
    verdict.decided = Decision::kHolds;
    verdict.note = "every deviation-event measure vanishes over the tail window";
  } else {
    verdict.note = "deviation-event measures have not vanished within the horizon";
  }
  return verdict;
}

ConvergenceVerdict converges_ae(const SequenceSample& sequence, const Variable& limit,
                                const PossibilityDistribution& dist, const ConvergenceOptions& options) {
  require_sequence(sequence, limit, dist, "converges_ae");
  require_grid(options.eps_grid, "converges_ae");

  const std::size_t horizon = sequence.horizon();
  ConvergenceVerdict verdict;
  verdict.kind = ConvergenceKind::kAlmostEverywhere;
  verdict.horizon = horizon;
  verdict.eps_grid = options.eps_grid;

  if (sequence.limits) {
    decide_analytically(verdict, sequence, limit, dist);
    return verdict;
  }
  if (horizon < 2) {
    verdict.note = "a single term carries no evidence about pointwise convergence";
    return verdict;
  }

  const std::size_t from = tol::tail_window_start(horizon);
  const double threshold = *std::min_element(options.eps_grid.begin(), options.eps_grid.end());
  bool all_converge = true;
  for (std::size_t i = 0; i < limit.size(); ++i) {
    if (!(dist[i] > options.decay_tol)) continue;
    const double last = sequence.terms[horizon - 1][i];
    double spread = 0.0;
    for (std::size_t n = from; n <= horizon; ++n) spread = std::max(spread, std::abs(sequence.terms[n - 1][i] - last));
    const bool settled = spread <= options.cauchy_tol && std::abs(last - limit[i]) <= options.cauchy_tol;
    if (settled) continue;
    all_converge = false;
    if (persists(sequence, limit, i, threshold, from)) {
      verdict.decided = Decision::kFails;
      verdict.witness = Witness{i, horizon, deviation(sequence, limit, horizon, i)};
      verdict.note = "an outcome of positive weight stays away from the limit across the tail window";
      return verdict;
    }
  }
  if (all_converge) {
    verdict.decided = Decision::kHolds;
    verdict.note = "every outcome of positive weight passes the Cauchy window test at the limit";
  } else {
    verdict.note = "some outcome of positive weight has not settled within the horizon";
  }
  return verdict;
}

ImplicationReport in_measure_implies_ae(const SequenceSample& sequence, const Variable& limit,
                                        const PossibilityDistribution& dist, const ConvergenceOptions& options) {
  return {converges_in_measure(sequence, limit, dist, options), converges_ae(sequence, limit, dist, options)};
}

}  // namespace possib
