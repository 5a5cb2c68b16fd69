#include <algorithm>
#include <cmath>
#include <string>

#include "possib/error.hpp"
#include "possib/scenario.hpp"

namespace possib {
namespace {

constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string("generator: ") + what + " must be finite");
}

}  // namespace

double seeded_unit(std::uint64_t seed, std::uint64_t k, std::uint64_t outcome) noexcept {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ k);
  h = splitmix(h ^ outcome);
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

std::string_view family_name(const GeneratorSpec& gen) noexcept {
  return std::visit(overloaded{
                        [](const ExplicitTable&) -> std::string_view { return "explicit"; },
                        [](const AffineBasis&) -> std::string_view { return "affine-basis"; },
                        [](const SeededUniform&) -> std::string_view { return "seeded-uniform"; },
                    },
                    gen);
}

void validate_generator(const GeneratorSpec& gen, std::size_t outcomes) {
  std::visit(overloaded{
                 [&](const ExplicitTable& t) {
                   if (t.rows.empty()) throw ValidationError("generator: explicit table has no rows");
                   for (const auto& row : t.rows) {
                     if (row.size() != outcomes) throw ValidationError("generator: explicit table is not rectangular");
                     for (double v : row) require_finite(v, "table values");
                   }
                 },
                 [&](const AffineBasis& a) {
                   if (a.coefficients.size() != outcomes)
                     throw ValidationError("generator: affine coefficients do not cover the space");
                   for (const auto& c : a.coefficients) {
                     require_finite(c.alpha, "alpha");
                     require_finite(c.beta, "beta");
                     require_finite(c.gamma, "gamma");
                     require_finite(c.eta, "eta");
                   }
                 },
                 [&](const SeededUniform& s) {
                   if (s.base.size() != outcomes || s.amp.size() != outcomes)
                     throw ValidationError("generator: seeded base/amp do not cover the space");
                   for (double b : s.base) require_finite(b, "base");
                   for (double a : s.amp) {
                     require_finite(a, "amp");
                     if (a < 0.0) throw ValidationError("generator: amp must be non-negative");
                   }
                 },
             },
             gen);
}

Variable generate_variable(const GeneratorSpec& gen, const SpaceRef& space, std::size_t k) {
  if (k == 0) throw StructuralError("generate_variable: k must be at least 1");
  const std::size_t size = space->size();
  std::vector<double> values(size);
  std::visit(overloaded{
                 [&](const ExplicitTable& t) {
                   if (k > t.rows.size()) {
                     throw StructuralError("generate_variable: k=" + std::to_string(k) + " beyond explicit table of " +
                                           std::to_string(t.rows.size()) + " rows");
                   }
                   if (t.rows[k - 1].size() != size) throw StructuralError("generate_variable: table row width");
                   values = t.rows[k - 1];
                 },
                 [&](const AffineBasis& a) {
                   if (a.coefficients.size() != size) throw StructuralError("generate_variable: coefficient count");
                   const double kk = static_cast<double>(k);
                   const double root = std::sqrt(kk);
                   const double lg = std::log(kk + 1.0);
                   for (std::size_t i = 0; i < size; ++i) {
                     const auto& c = a.coefficients[i];
                     values[i] = c.alpha * kk + c.beta * root + c.gamma * lg + c.eta;
                   }
                 },
                 [&](const SeededUniform& s) {
                   if (s.base.size() != size || s.amp.size() != size)
                     throw StructuralError("generate_variable: base/amp count");
                   for (std::size_t i = 0; i < size; ++i) values[i] = s.base[i] + s.amp[i] * seeded_unit(s.seed, k, i);
                 },
             },
             gen);
  return Variable(space, std::move(values));
}

std::optional<std::size_t> max_index(const GeneratorSpec& gen) noexcept {
  if (const auto* t = std::get_if<ExplicitTable>(&gen)) return t->rows.size();
  return std::nullopt;
}

std::optional<std::vector<double>> average_limit(const GeneratorSpec& gen, std::size_t outcomes) {
  if (const auto* a = std::get_if<AffineBasis>(&gen)) {
    std::vector<double> out(outcomes, 0.0);
    for (std::size_t i = 0; i < outcomes && i < a->coefficients.size(); ++i)
      out[i] = std::max(a->coefficients[i].alpha, 0.0);
    return out;
  }
  if (std::holds_alternative<SeededUniform>(gen)) return std::vector<double>(outcomes, 0.0);
  return std::nullopt;
}

}  // namespace possib
