#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "possib/space.hpp"
#include "possib/tolerance.hpp"

namespace possib {

/// Events B_1..B_N on one space. Indices in the public API are 1-based to
/// match the sequence index n.
class EventTrajectory {
 public:
  EventTrajectory(SpaceRef space, std::vector<Event> events);

  const SpaceRef& space() const noexcept { return space_; }
  std::size_t horizon() const noexcept { return events_.size(); }
  const Event& at(std::size_t n) const;
  std::span<const Event> events() const noexcept { return events_; }

 private:
  SpaceRef space_;
  std::vector<Event> events_;
};

enum class ConvergenceKind { kInMeasure, kAlmostEverywhere };
enum class Decision { kHolds, kFails, kUndecided };

const char* to_string(ConvergenceKind kind) noexcept;
const char* to_string(Decision decision) noexcept;

struct Witness {
  std::size_t outcome;
  std::size_t n;
  double value;  // term minus limit at (outcome, n)
};

/// Horizon evidence for one epsilon of an in-measure check.
struct EpsilonEvidence {
  double eps;
  double tail_max;                         // max of P_lambda(B_n(eps)) over the tail window
  std::optional<std::size_t> settles_at;   // first n after which the trajectory stays <= decay_tol
  Decision decided;
};

struct ConvergenceVerdict {
  ConvergenceKind kind = ConvergenceKind::kInMeasure;
  Decision decided = Decision::kUndecided;
  std::optional<Witness> witness;  // present iff decided == kFails
  std::size_t horizon = 0;
  std::vector<double> eps_grid;
  bool exact = false;  // decided from analytic per-outcome limits
  std::vector<EpsilonEvidence> evidence;
  std::string note;
};

/// Terms n = 1..N of a sequence of variables, optionally with the analytic
/// pointwise limit of every outcome (nullopt entry: no limit exists there).
struct SequenceSample {
  std::vector<Variable> terms;
  std::optional<std::vector<std::optional<double>>> limits;

  std::size_t horizon() const noexcept { return terms.size(); }
};

struct ConvergenceOptions {
  std::vector<double> eps_grid{0.1, 0.05, 0.01};
  double decay_tol = tol::kDecay;
  double cauchy_tol = tol::kCauchy;
};

/// B(eps) = {s : |y(s) - limit(s)| >= eps}.
Event deviation_event(const Variable& y, const Variable& limit, double eps);
EventTrajectory deviation_trajectory(std::span<const Variable> terms, const Variable& limit, double eps);

/// Entry n-1 holds P_lambda(B_n).
std::vector<double> measure_trajectory(const EventTrajectory& trajectory, const PossibilityDistribution& dist);

/// A_m = max{values[n] : m <= n <= N}, with 1-based m.
double tail_sup(std::span<const double> values, std::size_t m);
/// A_1..A_N in one backward pass.
std::vector<double> tail_sup_sequence(std::span<const double> values);

/// Union of B_n for n in [m, N]. At a finite horizon this over-approximates
/// the set of outcomes lying in infinitely many B_n.
Event limsup_event(const EventTrajectory& trajectory, std::size_t m);
/// limsup_event for every m = 1..N, in one backward pass.
std::vector<Event> limsup_events(const EventTrajectory& trajectory);

struct BorelCantelliRow {
  std::size_t m;
  double limsup_measure;
  double tail_sup;
};

struct BorelCantelliReport {
  std::vector<BorelCantelliRow> rows;
  bool inequality_holds = true;              // limsup_measure <= tail_sup at every m, exactly
  Decision vanishes = Decision::kUndecided;  // kHolds: tail_sup reached zero inside the horizon
  std::optional<std::size_t> vanish_index;   // first m with tail_sup <= decay_tol
};

BorelCantelliReport borel_cantelli_check(const EventTrajectory& trajectory, const PossibilityDistribution& dist,
                                         double decay_tol = tol::kDecay);

ConvergenceVerdict converges_in_measure(const SequenceSample& sequence, const Variable& limit,
                                        const PossibilityDistribution& dist, const ConvergenceOptions& options = {});

ConvergenceVerdict converges_ae(const SequenceSample& sequence, const Variable& limit,
                                const PossibilityDistribution& dist, const ConvergenceOptions& options = {});

struct ImplicationReport {
  ConvergenceVerdict in_measure;
  ConvergenceVerdict almost_everywhere;
  /// False only when in-measure holds while a.e. fails.
  bool consistent() const noexcept {
    return !(in_measure.decided == Decision::kHolds && almost_everywhere.decided == Decision::kFails);
  }
};

ImplicationReport in_measure_implies_ae(const SequenceSample& sequence, const Variable& limit,
                                        const PossibilityDistribution& dist, const ConvergenceOptions& options = {});

}  // namespace possib
