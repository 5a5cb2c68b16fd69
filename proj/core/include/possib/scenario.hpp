#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "possib/psi.hpp"
#include "possib/space.hpp"

namespace possib {

/// Rows are k = 1..K, columns follow the canonical outcome order.
struct ExplicitTable {
  std::vector<std::vector<double>> rows;
  bool operator==(const ExplicitTable&) const = default;
};

/// X_k(s) = alpha*k + beta*sqrt(k) + gamma*ln(k+1) + eta.
struct AffineCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  bool operator==(const AffineCoefficients&) const = default;
};

struct AffineBasis {
  std::vector<AffineCoefficients> coefficients;  // one per outcome
  bool operator==(const AffineBasis&) const = default;
};

/// X_k(s) = base(s) + amp(s) * seeded_unit(seed, k, s).
struct SeededUniform {
  std::uint64_t seed = 0;
  std::vector<double> base;
  std::vector<double> amp;
  bool operator==(const SeededUniform&) const = default;
};

using GeneratorSpec = std::variant<ExplicitTable, AffineBasis, SeededUniform>;

std::string_view family_name(const GeneratorSpec& gen) noexcept;

/// Deterministic value in [-1, 1) derived from (seed, k, outcome index).
///
///   h = mix(seed); h = mix(h ^ k); h = mix(h ^ outcome)
///   u = (h >> 11) * 2^-53;  return 2u - 1
///
/// where mix is the SplitMix64 step: z += 0x9E3779B97F4A7C15;
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
/// return z ^ (z >> 31).
double seeded_unit(std::uint64_t seed, std::uint64_t k, std::uint64_t outcome) noexcept;

/// Checks shapes and value ranges against a space of `outcomes` outcomes.
void validate_generator(const GeneratorSpec& gen, std::size_t outcomes);

/// X_k for k >= 1. Throws StructuralError past an explicit table.
Variable generate_variable(const GeneratorSpec& gen, const SpaceRef& space, std::size_t k);

/// Largest k the generator can produce, if bounded.
std::optional<std::size_t> max_index(const GeneratorSpec& gen) noexcept;

/// Pointwise limit of M_n / n for closed-form families: max(alpha, 0) for the
/// affine basis, 0 for the bounded seeded family, none for tables.
std::optional<std::vector<double>> average_limit(const GeneratorSpec& gen, std::size_t outcomes);

struct LlnSettings {
  std::optional<Theorem> theorem;
  std::optional<PsiFunction> psi;
  std::optional<double> delta;
  std::optional<double> constant;
  bool operator==(const LlnSettings&) const = default;
};

inline constexpr std::size_t kDefaultHorizon = 1000;

struct Scenario {
  SpaceRef space;
  PossibilityDistribution distribution;
  bool renormalize = false;
  GeneratorSpec generator;
  LlnSettings lln;
  std::size_t horizon = kDefaultHorizon;
  std::vector<double> eps_grid{0.1, 0.05, 0.01};

  Variable variable(std::size_t k) const { return generate_variable(generator, space, k); }

  bool operator==(const Scenario& other) const;
};

/// Parses a YAML (or JSON) scenario document and validates it.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical YAML rendering; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// 64-bit FNV-1a digest of a document, as 16 lowercase hex digits.
std::string document_digest(std::string_view text);

}  // namespace possib
