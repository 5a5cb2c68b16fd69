#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace possib {

/// A finite, non-empty set of outcomes with a fixed canonical order. Every
/// function on the space is stored as a vector indexed in that order.
class SampleSpace {
 public:
  explicit SampleSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Like index_of but throws StructuralError for an unknown label.
  std::size_t require_index(std::string_view label) const;

  bool operator==(const SampleSpace& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpaceRef = std::shared_ptr<const SampleSpace>;

SpaceRef make_space(std::vector<std::string> labels);

/// Throws StructuralError unless both refer to equal spaces.
void require_same_space(const SpaceRef& a, const SpaceRef& b, std::string_view context);

enum class Normalization {
  kStrict,       // max weight must already be exactly 1
  kRenormalize,  // divide every weight by the max weight
};

/// Possibility distribution lambda: weights in [0,1] with max exactly 1.
class PossibilityDistribution {
 public:
  static PossibilityDistribution from_weights(SpaceRef space, std::vector<double> weights,
                                              Normalization mode = Normalization::kStrict);
  static PossibilityDistribution from_map(SpaceRef space, const std::map<std::string, double>& weights,
                                          Normalization mode = Normalization::kStrict);

  const SpaceRef& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t i) const { return weights_.at(i); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  bool operator==(const PossibilityDistribution& other) const {
    return *space_ == *other.space_ && weights_ == other.weights_;
  }

 private:
  PossibilityDistribution(SpaceRef space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {}

  SpaceRef space_;
  std::vector<double> weights_;
};

/// Real-valued function on a sample space. Values are finite.
class Variable {
 public:
  Variable(SpaceRef space, std::vector<double> values);

  static Variable constant(SpaceRef space, double c);

  const SpaceRef& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double at(std::string_view label) const;
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const Variable& other) const {
    return *space_ == *other.space_ && values_ == other.values_;
  }

 private:
  SpaceRef space_;
  std::vector<double> values_;
};

/// Subset of a sample space, stored as a membership mask.
class Event {
 public:
  Event(SpaceRef space, std::vector<bool> mask);

  static Event none(SpaceRef space);
  static Event all(SpaceRef space);
  static Event of(SpaceRef space, std::span<const std::string> labels);
  static Event of_indices(SpaceRef space, std::span<const std::size_t> indices);

  const SpaceRef& space() const noexcept { return space_; }
  bool contains(std::size_t i) const { return mask_.at(i); }
  bool empty() const noexcept;
  std::size_t count() const noexcept;
  std::vector<std::size_t> members() const;
  std::vector<std::string> member_labels() const;

  Event complement() const;
  bool is_subset_of(const Event& other) const;
  Event operator|(const Event& other) const;
  Event operator&(const Event& other) const;
  Event& operator|=(const Event& other);

  bool operator==(const Event& other) const {
    return *space_ == *other.space_ && mask_ == other.mask_;
  }

 private:
  SpaceRef space_;
  std::vector<bool> mask_;
};

}  // namespace possib
