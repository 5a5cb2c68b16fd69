#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "possib/convergence.hpp"
#include "possib/error.hpp"
#include "possib/lln.hpp"
#include "possib/moments.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

namespace possib {
namespace {

class SqrtGap : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    scenario_ = new Scenario(testing::load("s2.yaml"));
    trajectory_ = new MaxTrajectory(compute_max_trajectory(*scenario_, 20000));
  }
  static void TearDownTestSuite() {
    delete trajectory_;
    delete scenario_;
  }

  const Scenario& s() const { return *scenario_; }
  const MaxTrajectory& t() const { return *trajectory_; }
  Variable zero() const { return Variable::constant(s().space, 0.0); }
  std::span<const Variable> first(std::size_t n) const { return {t().deviations.data(), n}; }

  static Scenario* scenario_;
  static MaxTrajectory* trajectory_;
};

Scenario* SqrtGap::scenario_ = nullptr;
MaxTrajectory* SqrtGap::trajectory_ = nullptr;

TEST_F(SqrtGap, DeviationEvent) {
  EXPECT_EQ(deviation_event(t().deviations[99], zero(), 0.05).member_labels(), std::vector<std::string>{"b"});
  EXPECT_TRUE(deviation_event(t().deviations[400], zero(), 0.05).empty());
  EXPECT_TRUE(deviation_event(t().deviations[3], zero(), 10.0).empty());
  EXPECT_THROW(deviation_event(t().deviations[0], zero(), 0.0), DomainError);
}

TEST_F(SqrtGap, MeasureTrajectoryDropsAfter400) {
  const auto m = measure_trajectory(deviation_trajectory(first(1000), zero(), 0.05), s().distribution);
  ASSERT_EQ(m.size(), 1000u);
  for (std::size_t n = 1; n <= 1000; ++n) ASSERT_EQ(m[n - 1], n <= 400 ? 0.5 : 0.0) << "n=" << n;
}

TEST_F(SqrtGap, TailSupAndLimsup) {
  const auto traj = deviation_trajectory(first(1000), zero(), 0.05);
  const auto m = measure_trajectory(traj, s().distribution);
  EXPECT_EQ(tail_sup(m, 1), 0.5);
  EXPECT_EQ(tail_sup(m, 400), 0.5);
  EXPECT_EQ(tail_sup(m, 401), 0.0);
  EXPECT_THROW(tail_sup(m, 0), StructuralError);
  EXPECT_THROW(tail_sup(m, 1001), StructuralError);

  EXPECT_TRUE(limsup_event(traj, 401).empty());
  EXPECT_EQ(limsup_event(traj, 1).member_labels(), std::vector<std::string>{"b"});
  EXPECT_THROW(limsup_event(traj, 1001), StructuralError);
}

TEST_F(SqrtGap, BorelCantelli) {
  const auto traj = deviation_trajectory(first(1000), zero(), 0.05);
  const auto r = borel_cantelli_check(traj, s().distribution);
  EXPECT_TRUE(r.inequality_holds);
  EXPECT_EQ(r.vanishes, Decision::kHolds);
  ASSERT_TRUE(r.vanish_index.has_value());
  EXPECT_EQ(*r.vanish_index, 401u);
}

TEST_F(SqrtGap, InMeasureHoldsAnalyticallyAndOnTheHorizon) {
  ConvergenceOptions opt;
  opt.eps_grid = {0.05, 0.01};
  const auto sample = deviation_sample(s(), t());
  ASSERT_TRUE(sample.limits.has_value());
  EXPECT_NEAR(*(*sample.limits)[0], 0.0, 1e-15);
  EXPECT_NEAR(*(*sample.limits)[1], 0.0, 1e-15);

  const auto exact = converges_in_measure(sample, zero(), s().distribution, opt);
  EXPECT_EQ(exact.decided, Decision::kHolds);
  EXPECT_TRUE(exact.exact);
  EXPECT_FALSE(exact.witness.has_value());

  SequenceSample raw{sample.terms, std::nullopt};
  const auto horizon = converges_in_measure(raw, zero(), s().distribution, opt);
  EXPECT_EQ(horizon.decided, Decision::kHolds);
  EXPECT_FALSE(horizon.exact);
  ASSERT_EQ(horizon.evidence.size(), 2u);
  EXPECT_EQ(horizon.evidence[0].settles_at, 401u);
  EXPECT_EQ(horizon.evidence[1].settles_at, 10001u);
}

TEST_F(SqrtGap, AlmostEverywhere) {
  const auto sample = deviation_sample(s(), t());
  const auto r = in_measure_implies_ae(sample, zero(), s().distribution);
  EXPECT_EQ(r.in_measure.decided, Decision::kHolds);
  EXPECT_EQ(r.almost_everywhere.decided, Decision::kHolds);
  EXPECT_TRUE(r.consistent());
  for (std::size_t n : {4u, 100u, 10000u})
    EXPECT_NEAR(t().deviations[n - 1][1], -1.0 / std::sqrt(static_cast<double>(n)), 1e-9);
}

TEST_F(SqrtGap, HorizonModeStaysUndecidedWhileStillMoving) {
  // At N = 1000 the b-path still moves by ~1.7e-3 across the tail window.
  SequenceSample raw{{t().deviations.begin(), t().deviations.begin() + 1000}, std::nullopt};
  ConvergenceOptions opt;
  opt.eps_grid = {0.05, 0.01};
  EXPECT_EQ(converges_ae(raw, zero(), s().distribution, opt).decided, Decision::kUndecided);
  EXPECT_EQ(converges_in_measure(raw, zero(), s().distribution, opt).decided, Decision::kUndecided);
}

class Simple : public ::testing::Test {
 protected:
  SpaceRef space = make_space({"p", "q", "r"});
  PossibilityDistribution dist = PossibilityDistribution::from_weights(space, {1.0, 0.6, 0.0});

  SequenceSample sample(std::size_t horizon, auto&& f) {
    SequenceSample s;
    for (std::size_t n = 1; n <= horizon; ++n) s.terms.push_back(f(n));
    return s;
  }
};

TEST_F(Simple, ConstantSequenceConvergesToItself) {
  const Variable x(space, {1.0, -2.0, 3.0});
  for (std::size_t horizon : {1u, 2u, 50u}) {
    const auto s = sample(horizon, [&](std::size_t) { return x; });
    EXPECT_EQ(converges_in_measure(s, x, dist).decided, Decision::kHolds);
    if (horizon >= 2) EXPECT_EQ(converges_ae(s, x, dist).decided, Decision::kHolds);
  }
}

TEST_F(Simple, PersistentDeviationFailsWithWitness) {
  const Variable target = Variable::constant(space, 0.0);
  const auto s = sample(100, [&](std::size_t) { return Variable(space, {1.0, 0.0, 0.0}); });
  const auto v = converges_in_measure(s, target, dist);
  EXPECT_EQ(v.decided, Decision::kFails);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->outcome, 0u);
  EXPECT_EQ(v.witness->n, 100u);
  EXPECT_EQ(v.witness->value, 1.0);
  const auto ae = converges_ae(s, target, dist);
  EXPECT_EQ(ae.decided, Decision::kFails);
  EXPECT_TRUE(ae.witness.has_value());
}

TEST_F(Simple, DivergenceOnNullOutcomeIsIgnored) {
  const Variable target = Variable::constant(space, 0.0);
  auto s = sample(200, [&](std::size_t n) { return Variable(space, {0.0, 0.0, n % 2 ? 5.0 : -5.0}); });
  EXPECT_EQ(converges_ae(s, target, dist).decided, Decision::kHolds);
  EXPECT_EQ(converges_in_measure(s, target, dist).decided, Decision::kHolds);
  s.limits = std::vector<std::optional<double>>{0.0, 0.0, std::nullopt};
  EXPECT_EQ(converges_ae(s, target, dist).decided, Decision::kHolds);
  s.limits = std::vector<std::optional<double>>{0.0, std::nullopt, 0.0};
  const auto v = converges_ae(s, target, dist);
  EXPECT_EQ(v.decided, Decision::kFails);
  EXPECT_EQ(v.witness->outcome, 1u);
}

TEST_F(Simple, TrajectoryEdgeCases) {
  std::vector<Event> none(5, Event::none(space)), all(5, Event::all(space));
  EXPECT_EQ(measure_trajectory(EventTrajectory(space, none), dist), std::vector<double>(5, 0.0));
  EXPECT_EQ(measure_trajectory(EventTrajectory(space, all), dist), std::vector<double>(5, 1.0));

  const auto empty_bc = borel_cantelli_check(EventTrajectory(space, none), dist);
  EXPECT_TRUE(empty_bc.inequality_holds);
  EXPECT_EQ(empty_bc.vanishes, Decision::kHolds);
  EXPECT_EQ(*empty_bc.vanish_index, 1u);

  const auto full_bc = borel_cantelli_check(EventTrajectory(space, all), dist);
  EXPECT_TRUE(full_bc.inequality_holds);
  EXPECT_EQ(full_bc.vanishes, Decision::kUndecided);

  EXPECT_THROW(borel_cantelli_check(EventTrajectory(space, {Event::all(space)}), dist), StructuralError);
  EXPECT_THROW(EventTrajectory(space, {}), StructuralError);
}

TEST(TailSup, ConstantAndDecreasing) {
  const std::vector<double> flat(10, 0.3);
  for (std::size_t m = 1; m <= 10; ++m) EXPECT_EQ(tail_sup(flat, m), 0.3);
  const std::vector<double> dec{0.9, 0.7, 0.5, 0.2, 0.1};
  for (std::size_t m = 1; m <= dec.size(); ++m) EXPECT_EQ(tail_sup(dec, m), dec[m - 1]);
  EXPECT_EQ(tail_sup_sequence(dec), dec);
}

TEST(TailSup, RandomTrajectoriesAreNonIncreasingAndBoundLimsup) {
  std::mt19937_64 rng(21);
  for (int c = 0; c < 200; ++c) {
    const auto rc = testing::random_case(rng, 8, 5);
    std::vector<Event> events;
    for (int n = 0; n < 60; ++n) events.push_back(testing::random_event(rng, rc.space));
    const EventTrajectory traj(rc.space, events);
    const auto measures = measure_trajectory(traj, rc.dist);
    const auto sups = tail_sup_sequence(measures);
    for (std::size_t m = 1; m < sups.size(); ++m) ASSERT_LE(sups[m], sups[m - 1]);
    for (std::size_t m = 1; m <= sups.size(); m += 9) {
      ASSERT_EQ(sups[m - 1], tail_sup(measures, m));
      ASSERT_LE(induced_measure(rc.dist, limsup_event(traj, m)), tail_sup(measures, m));
      ASSERT_EQ(limsup_event(traj, m), limsup_events(traj)[m - 1]);
    }
    ASSERT_TRUE(borel_cantelli_check(traj, rc.dist).inequality_holds);
  }
}

TEST(TailSup, VanishingTrajectoryEventuallyBelowAnyEpsilon) {
  // Measures of events shrinking to empty: tail sup reaches 0 and stays there.
  const auto space = make_space({"a", "b", "c", "d"});
  const auto dist = PossibilityDistribution::from_weights(space, {0.2, 1.0, 0.4, 0.7});
  std::vector<Event> events;
  for (std::size_t n = 1; n <= 50; ++n) {
    std::vector<bool> mask(4);
    for (std::size_t i = 0; i < 4; ++i) mask[i] = n <= 10 * (i + 1) && (n + i) % 3 != 0;
    events.emplace_back(space, mask);
  }
  const auto sups = tail_sup_sequence(measure_trajectory(EventTrajectory(space, events), dist));
  EXPECT_EQ(sups.back(), 0.0);
  for (double eps : {0.5, 0.1, 1e-3}) {
    auto it = std::find_if(sups.begin(), sups.end(), [&](double a) { return a < eps; });
    ASSERT_NE(it, sups.end());
    EXPECT_TRUE(std::all_of(it, sups.end(), [&](double a) { return a < eps; }));
  }
}

TEST(Implication, RandomClosedFormScenariosNeverContradict) {
  std::mt19937_64 rng(22);
  for (int c = 0; c < 500; ++c) {
    const Scenario s = testing::random_affine_scenario(rng);
    const auto traj = compute_max_trajectory(s, s.horizon);
    const auto r = in_measure_implies_ae(deviation_sample(s, traj), Variable::constant(s.space, 0.0), s.distribution);
    ASSERT_TRUE(r.in_measure.exact);
    ASSERT_TRUE(r.consistent()) << serialize_scenario(s);
  }
}

TEST(Implication, RandomTablesNeverContradictOnTheHorizon) {
  std::mt19937_64 rng(23);
  for (int c = 0; c < 500; ++c) {
    const auto rc = testing::random_case(rng, 6, 40);
    if (rc.xs.size() < 2) continue;
    const Scenario s = testing::table_scenario(rc);
    const auto traj = compute_max_trajectory(s, s.horizon);
    const auto r = in_measure_implies_ae(deviation_sample(s, traj), Variable::constant(s.space, 0.0), s.distribution);
    ASSERT_FALSE(r.in_measure.exact);
    ASSERT_TRUE(r.consistent());
  }
}

}  // namespace
}  // namespace possib
