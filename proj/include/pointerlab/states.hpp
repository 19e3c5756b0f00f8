#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "pointerlab/layout.hpp"

namespace pointerlab {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kEigenClamp = 1e-12;

/// Unit vector on a labeled composite space.
class PureState {
 public:
  /// Throws LayoutError on size mismatch, InvariantError if |norm - 1| > 1e-12.
  PureState(SubsystemLayout layout, Vector amplitudes);

  /// Rescales to unit norm first. Throws InvariantError for a (near) zero vector.
  static PureState normalized(SubsystemLayout layout, Vector amplitudes);
  /// Computational basis vector |index>.
  static PureState basis(SubsystemLayout layout, std::size_t index);
  /// Single-factor convenience.
  static PureState basis(std::string label, std::size_t dim, std::size_t index);

  const SubsystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  /// Same amplitudes on a relabeled layout of identical dimensions.
  PureState relabeled(SubsystemLayout layout) const;

 private:
  SubsystemLayout layout_;
  Vector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
 public:
  /// Validates hermiticity, trace and spectrum at 1e-12.
  DensityOperator(SubsystemLayout layout, Matrix matrix);

  /// Skips the spectral check. For results of operations that preserve the
  /// invariants by construction (partial traces, conjugation, tensor products).
  static DensityOperator trusted(SubsystemLayout layout, Matrix matrix);
  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(SubsystemLayout layout);

  const SubsystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  struct TrustedTag {};
  DensityOperator(SubsystemLayout layout, Matrix matrix, TrustedTag);

  SubsystemLayout layout_;
  Matrix matrix_;
};

class UnitaryOperator {
 public:
  /// Throws InvariantError unless max|U^dag U - I| <= 1e-12.
  UnitaryOperator(SubsystemLayout layout, Matrix matrix);

  static UnitaryOperator identity(SubsystemLayout layout);

  const SubsystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// max-abs entry of U^dag U - I.
  static double unitarity_error(const Matrix& m);

 private:
  SubsystemLayout layout_;
  Matrix matrix_;
};

}  // namespace pointerlab
