#pragma once

// Seeded random finite possibility spaces for property sweeps.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "possib/lln.hpp"
#include "possib/scenario.hpp"
#include "possib/space.hpp"

namespace possib::testing {

struct RandomCase {
  SpaceRef space;
  std::vector<double> weights;
  PossibilityDistribution dist;
  std::vector<Variable> xs;  // X_1..X_n
};

inline SpaceRef numbered_space(std::size_t size) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back("w" + std::to_string(i));
  return make_space(std::move(labels));
}

/// Weights in [0,1], some exactly 0, one forced to 1.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.15);
  std::vector<double> w(size);
  for (auto& x : w) x = zero(rng) ? 0.0 : u(rng);
  w[std::uniform_int_distribution<std::size_t>(0, size - 1)(rng)] = 1.0;
  return w;
}

inline RandomCase random_case(std::mt19937_64& rng, std::size_t max_outcomes = 20, std::size_t max_terms = 50) {
  const std::size_t size = std::uniform_int_distribution<std::size_t>(1, max_outcomes)(rng);
  const std::size_t terms = std::uniform_int_distribution<std::size_t>(1, max_terms)(rng);
  auto space = numbered_space(size);
  auto weights = random_weights(rng, size);
  auto dist = PossibilityDistribution::from_weights(space, weights);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  std::vector<Variable> xs;
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<double> v(size);
    for (auto& x : v) x = value(rng);
    xs.emplace_back(space, std::move(v));
  }
  return {space, std::move(weights), std::move(dist), std::move(xs)};
}

inline Event random_event(std::mt19937_64& rng, const SpaceRef& space) {
  std::bernoulli_distribution in(0.4);
  std::vector<bool> mask(space->size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = in(rng);
  return Event(space, std::move(mask));
}

/// Affine-basis scenario with random coefficients; closed-form limits apply.
inline Scenario random_affine_scenario(std::mt19937_64& rng, std::size_t max_outcomes = 6) {
  const std::size_t size = std::uniform_int_distribution<std::size_t>(1, max_outcomes)(rng);
  auto space = numbered_space(size);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::bernoulli_distribution drop(0.3);
  AffineBasis basis;
  for (std::size_t i = 0; i < size; ++i) {
    AffineCoefficients c;
    c.alpha = drop(rng) ? 0.0 : coef(rng);
    c.beta = drop(rng) ? 0.0 : coef(rng);
    c.gamma = drop(rng) ? 0.0 : coef(rng);
    c.eta = coef(rng);
    basis.coefficients.push_back(c);
  }
  Scenario s{.space = space,
             .distribution = PossibilityDistribution::from_weights(space, random_weights(rng, size)),
             .renormalize = false,
             .generator = basis,
             .lln = {}};
  s.horizon = 200;
  return s;
}

/// Explicit-table scenario built from a random case.
inline Scenario table_scenario(const RandomCase& rc) {
  ExplicitTable t;
  for (const auto& x : rc.xs) t.rows.emplace_back(x.values().begin(), x.values().end());
  Scenario s{.space = rc.space, .distribution = rc.dist, .renormalize = false, .generator = t, .lln = {}};
  s.horizon = rc.xs.size();
  return s;
}

}  // namespace possib::testing
