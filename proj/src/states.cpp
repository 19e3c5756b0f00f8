#include "pointerlab/states.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pointerlab/error.hpp"

namespace pointerlab {

namespace {

void require_size(const SubsystemLayout& layout, Eigen::Index n, const char* what) {
  if (static_cast<std::size_t>(n) != layout.total_dim()) {
    std::ostringstream os;
    os << what << ": size " << n << " does not match layout " << layout.describe();
    throw LayoutError(os.str());
  }
}

}  // namespace

PureState::PureState(SubsystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  require_size(layout_, amplitudes_.size(), "PureState");
  const double n = amplitudes_.norm();
  if (!(std::abs(n - 1.0) <= kNormTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "PureState: norm " << n << " differs from 1";
    throw InvariantError(os.str());
  }
}

PureState PureState::normalized(SubsystemLayout layout, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) throw InvariantError("PureState: cannot normalize a zero vector");
  amplitudes /= n;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(SubsystemLayout layout, std::size_t index) {
  if (index >= layout.total_dim()) throw LayoutError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(layout), std::move(v));
}

PureState PureState::basis(std::string label, std::size_t dim, std::size_t index) {
  return basis(SubsystemLayout::single(std::move(label), dim), index);
}

PureState PureState::relabeled(SubsystemLayout layout) const {
  if (layout.dims() != layout_.dims()) throw LayoutError("relabeled: dimensions differ");
  return PureState(std::move(layout), amplitudes_);
}

DensityOperator::DensityOperator(SubsystemLayout layout, Matrix matrix, TrustedTag)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  require_size(layout_, matrix_.rows(), "DensityOperator");
  if (matrix_.rows() != matrix_.cols()) throw LayoutError("DensityOperator: matrix not square");
}

DensityOperator DensityOperator::trusted(SubsystemLayout layout, Matrix matrix) {
  return DensityOperator(std::move(layout), std::move(matrix), TrustedTag{});
}

DensityOperator::DensityOperator(SubsystemLayout layout, Matrix matrix)
    : DensityOperator(std::move(layout), std::move(matrix), TrustedTag{}) {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kHermitianTol)) throw InvariantError("DensityOperator: not Hermitian");
  const cplx tr = matrix_.trace();
  if (!(std::abs(tr - cplx(1.0)) <= kNormTol)) throw InvariantError("DensityOperator: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() >= -kEigenClamp))
    throw InvariantError("DensityOperator: negative eigenvalue");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return trusted(psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(SubsystemLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return trusted(std::move(layout), Matrix::Identity(d, d) / static_cast<double>(d));
}

double UnitaryOperator::unitarity_error(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

UnitaryOperator::UnitaryOperator(SubsystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  require_size(layout_, matrix_.rows(), "UnitaryOperator");
  if (matrix_.rows() != matrix_.cols()) throw LayoutError("UnitaryOperator: matrix not square");
  const double err = unitarity_error(matrix_);
  if (!(err <= kUnitaryTol)) {
    std::ostringstream os;
    os << "UnitaryOperator: |U^dag U - I| = " << err;
    throw InvariantError(os.str());
  }
}

UnitaryOperator UnitaryOperator::identity(SubsystemLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return UnitaryOperator(std::move(layout), Matrix::Identity(d, d));
}

}  // namespace pointerlab
