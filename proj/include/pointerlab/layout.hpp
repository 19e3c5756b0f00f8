#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pointerlab {

struct Factor {
  std::string label;
  std::size_t dim = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered tensor factorization of a composite Hilbert space. The leftmost
/// factor is the slowest-varying index of the composite basis.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  /// Throws LayoutError on duplicate labels or zero dimensions.
  explicit SubsystemLayout(std::vector<Factor> factors);
  SubsystemLayout(std::initializer_list<Factor> factors)
      : SubsystemLayout(std::vector<Factor>(factors)) {}

  /// Single-factor layout.
  static SubsystemLayout single(std::string label, std::size_t dim);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  std::size_t total_dim() const { return total_dim_; }
  std::vector<std::size_t> dims() const;
  std::vector<std::string> labels() const;

  bool contains(std::string_view label) const;
  /// Position of label; throws LayoutError if absent.
  std::size_t index_of(std::string_view label) const;
  std::size_t dim_of(std::string_view label) const { return factors_[index_of(label)].dim; }

  /// Factors whose labels are in `labels`, in this layout's order.
  SubsystemLayout subset(std::span<const std::string> labels) const;
  /// Factors whose labels are not in `labels`, in this layout's order.
  SubsystemLayout complement(std::span<const std::string> labels) const;
  /// Per-factor membership mask for `labels`; throws on unknown labels.
  std::vector<bool> mask(std::span<const std::string> labels) const;

  /// Concatenation; throws LayoutError on label collision.
  SubsystemLayout concat(const SubsystemLayout& other) const;

  std::string describe() const;

  friend bool operator==(const SubsystemLayout&, const SubsystemLayout&) = default;

 private:
  std::vector<Factor> factors_;
  std::size_t total_dim_ = 1;
};

/// Throws LayoutError with `what` unless the layouts are identical.
void require_same_layout(const SubsystemLayout& a, const SubsystemLayout& b, std::string_view what);

}  // namespace pointerlab
