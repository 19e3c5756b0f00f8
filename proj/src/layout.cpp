#include "pointerlab/layout.hpp"

#include <algorithm>
#include <sstream>

#include "pointerlab/error.hpp"

namespace pointerlab {

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  total_dim_ = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].dim == 0) throw LayoutError("factor '" + factors_[i].label + "' has dimension 0");
    if (factors_[i].label.empty()) throw LayoutError("factor labels must be nonempty");
    for (std::size_t j = 0; j < i; ++j)
      if (factors_[j].label == factors_[i].label)
        throw LayoutError("duplicate subsystem label '" + factors_[i].label + "'");
    total_dim_ *= factors_[i].dim;
  }
}

SubsystemLayout SubsystemLayout::single(std::string label, std::size_t dim) {
  return SubsystemLayout(std::vector<Factor>{{std::move(label), dim}});
}

std::vector<std::size_t> SubsystemLayout::dims() const {
  std::vector<std::size_t> d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> l;
  l.reserve(factors_.size());
  for (const auto& f : factors_) l.push_back(f.label);
  return l;
}

bool SubsystemLayout::contains(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SubsystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw LayoutError("unknown subsystem label '" + std::string(label) + "' in " + describe());
}

std::vector<bool> SubsystemLayout::mask(std::span<const std::string> labels) const {
  std::vector<bool> m(factors_.size(), false);
  for (const auto& l : labels) m[index_of(l)] = true;
  return m;
}

SubsystemLayout SubsystemLayout::subset(std::span<const std::string> labels) const {
  const auto m = mask(labels);
  std::vector<Factor> out;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (m[i]) out.push_back(factors_[i]);
  return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::complement(std::span<const std::string> labels) const {
  const auto m = mask(labels);
  std::vector<Factor> out;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!m[i]) out.push_back(factors_[i]);
  return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Factor> out = factors_;
  for (const auto& f : other.factors_) {
    if (contains(f.label)) throw LayoutError("label collision on '" + f.label + "'");
    out.push_back(f);
  }
  return SubsystemLayout(std::move(out));
}

std::string SubsystemLayout::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << ", ";
    os << factors_[i].label << ':' << factors_[i].dim;
  }
  os << ']';
  return os.str();
}

void require_same_layout(const SubsystemLayout& a, const SubsystemLayout& b, std::string_view what) {
  if (!(a == b))
    throw LayoutError(std::string(what) + ": layout mismatch " + a.describe() + " vs " + b.describe());
}

}  // namespace pointerlab
