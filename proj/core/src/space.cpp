#include "possib/space.hpp"

#include <algorithm>
#include <cmath>

#include "possib/error.hpp"

namespace possib {

SampleSpace::SampleSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("sample space must contain at least one outcome");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError("duplicate outcome label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> SampleSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SampleSpace::require_index(std::string_view label) const {
  if (auto i = index_of(label)) return *i;
  throw StructuralError("unknown outcome '" + std::string(label) + "'");
}

SpaceRef make_space(std::vector<std::string> labels) {
  return std::make_shared<const SampleSpace>(std::move(labels));
}

void require_same_space(const SpaceRef& a, const SpaceRef& b, std::string_view context) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) {
    throw StructuralError(std::string(context) + ": operands live on different sample spaces");
  }
}

PossibilityDistribution PossibilityDistribution::from_weights(SpaceRef space, std::vector<double> weights,
                                                              Normalization mode) {
  if (!space) throw StructuralError("distribution requires a sample space");
  if (weights.size() != space->size()) {
    throw StructuralError("distribution has " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(space->size()) + " outcomes");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw ValidationError("weight of '" + space->label(i) + "' is outside [0, 1]");
    }
  }
  const double top = *std::max_element(weights.begin(), weights.end());
  if (mode == Normalization::kRenormalize) {
    if (top <= 0.0) throw ValidationError("cannot renormalize an all-zero distribution");
    for (double& w : weights) w /= top;
  } else if (top != 1.0) {
    throw ValidationError("maximum weight must be exactly 1 (got " + std::to_string(top) +
                          "); enable renormalize to rescale");
  }
  return PossibilityDistribution(std::move(space), std::move(weights));
}

PossibilityDistribution PossibilityDistribution::from_map(SpaceRef space,
                                                          const std::map<std::string, double>& weights,
                                                          Normalization mode) {
  if (!space) throw StructuralError("distribution requires a sample space");
  std::vector<double> dense(space->size(), 0.0);
  std::vector<bool> seen(space->size(), false);
  for (const auto& [label, w] : weights) {
    const std::size_t i = space->require_index(label);
    dense[i] = w;
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError("no weight given for outcome '" + space->label(i) + "'");
  }
  return from_weights(std::move(space), std::move(dense), mode);
}

Variable::Variable(SpaceRef space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw StructuralError("variable requires a sample space");
  if (values_.size() != space_->size()) {
    throw StructuralError("variable has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(space_->size()) + " outcomes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ValidationError("variable value at '" + space_->label(i) + "' is not finite");
    }
  }
}

Variable Variable::constant(SpaceRef space, double c) {
  const std::size_t n = space ? space->size() : 0;
  return Variable(std::move(space), std::vector<double>(n, c));
}

double Variable::at(std::string_view label) const { return values_[space_->require_index(label)]; }

Event::Event(SpaceRef space, std::vector<bool> mask) : space_(std::move(space)), mask_(std::move(mask)) {
  if (!space_) throw StructuralError("event requires a sample space");
  if (mask_.size() != space_->size()) throw StructuralError("event mask does not match the sample space");
}

Event Event::none(SpaceRef space) {
  const std::size_t n = space ? space->size() : 0;
  return Event(std::move(space), std::vector<bool>(n, false));
}

Event Event::all(SpaceRef space) {
  const std::size_t n = space ? space->size() : 0;
  return Event(std::move(space), std::vector<bool>(n, true));
}

Event Event::of(SpaceRef space, std::span<const std::string> labels) {
  Event ev = none(std::move(space));
  for (const auto& label : labels) ev.mask_[ev.space_->require_index(label)] = true;
  return ev;
}

Event Event::of_indices(SpaceRef space, std::span<const std::size_t> indices) {
  Event ev = none(std::move(space));
  for (std::size_t i : indices) {
    if (i >= ev.mask_.size()) throw StructuralError("event index out of range");
    ev.mask_[i] = true;
  }
  return ev;
}

bool Event::empty() const noexcept { return std::none_of(mask_.begin(), mask_.end(), [](bool b) { return b; }); }

std::size_t Event::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<std::size_t> Event::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

std::vector<std::string> Event::member_labels() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(space_->label(i));
  return out;
}

Event Event::complement() const {
  Event out = *this;
  out.mask_.flip();
  return out;
}

bool Event::is_subset_of(const Event& other) const {
  require_same_space(space_, other.space_, "subset test");
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i] && !other.mask_[i]) return false;
  return true;
}

Event Event::operator|(const Event& other) const {
  Event out = *this;
  out |= other;
  return out;
}

Event& Event::operator|=(const Event& other) {
  require_same_space(space_, other.space_, "event union");
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (other.mask_[i]) mask_[i] = true;
  return *this;
}

Event Event::operator&(const Event& other) const {
  require_same_space(space_, other.space_, "event intersection");
  Event out = *this;
  for (std::size_t i = 0; i < mask_.size(); ++i) out.mask_[i] = mask_[i] && other.mask_[i];
  return out;
}

}  // namespace possib
