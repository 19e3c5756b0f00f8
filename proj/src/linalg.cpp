#include "pointerlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pointerlab/error.hpp"
#include "pointerlab/kernels.hpp"

namespace pointerlab {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<bool> keep_mask(const SubsystemLayout& layout, const LabelSet& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  return layout.mask(keep);
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
  auto layout = a.layout().concat(b.layout());
  return PureState(std::move(layout), kron(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  auto layout = a.layout().concat(b.layout());
  return DensityOperator::trusted(std::move(layout), kron(a.matrix(), b.matrix()));
}

UnitaryOperator tensor(const UnitaryOperator& a, const UnitaryOperator& b) {
  auto layout = a.layout().concat(b.layout());
  return UnitaryOperator(std::move(layout), kron(a.matrix(), b.matrix()));
}

PureState tensor_all(std::span<const PureState> parts) {
  if (parts.empty()) throw InvalidArgument("tensor_all: empty list");
  PureState out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

DensityOperator partial_trace(const PureState& psi, const LabelSet& keep) {
  const auto mask = keep_mask(psi.layout(), keep);
  const auto dims = psi.layout().dims();
  auto layout = psi.layout().subset(keep);
  return DensityOperator::trusted(std::move(layout),
                                  kernels::partial_trace_pure(psi.amplitudes(), dims, mask));
}

DensityOperator partial_trace(const DensityOperator& rho, const LabelSet& keep) {
  const auto mask = keep_mask(rho.layout(), keep);
  const auto dims = rho.layout().dims();
  auto layout = rho.layout().subset(keep);
  return DensityOperator::trusted(std::move(layout),
                                  kernels::partial_trace_mixed(rho.matrix(), dims, mask));
}

Vector fix_phase(const Vector& v) {
  if (v.size() == 0) return v;
  const double max_mag = v.cwiseAbs().maxCoeff();
  if (max_mag == 0.0) return v;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= max_mag - 1e-12) {
      pick = i;
      break;
    }
  const cplx phase = std::conj(v(pick)) / std::abs(v(pick));
  return v * phase;
}

PureState purify(const DensityOperator& rho, std::string ghost_label) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  if (ghost_label.empty()) {
    for (const auto& l : rho.layout().labels()) ghost_label += l;
    ghost_label += "'";
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // Eigen returns ascending values; stable sort keeps solver order on exact ties.
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  Vector amps = Vector::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index col = order[static_cast<std::size_t>(k)];
    double p = es.eigenvalues()(col);
    if (p < kEigenClamp) p = 0.0;
    if (p == 0.0) continue;
    const Vector e = fix_phase(es.eigenvectors().col(col));
    for (Eigen::Index i = 0; i < d; ++i) amps(i * d + k) += std::sqrt(p) * e(i);
  }
  auto layout = rho.layout().concat(SubsystemLayout::single(ghost_label, rho.dim()));
  // Clamping removes at most ~d * 1e-12 of weight; renormalize.
  return PureState::normalized(std::move(layout), std::move(amps));
}

cplx inner(const PureState& a, const PureState& b) {
  require_same_layout(a.layout(), b.layout(), "inner");
  return a.amplitudes().dot(b.amplitudes());
}

double hs_inner(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_layout(rho.layout(), sigma.layout(), "hs_inner");
  return (rho.matrix().transpose().cwiseProduct(sigma.matrix())).sum().real();
}

Eigen::VectorXd spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < kEigenClamp) ev(i) = 0.0;
  return ev;
}

double entropy_bits(const Matrix& hermitian) {
  const auto ev = spectrum(hermitian);
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) h -= ev(i) * std::log2(ev(i));
  return std::max(h, 0.0);
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_bits(rho.matrix()); }

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_layout(rho.layout(), sigma.layout(), "trace_distance");
  return trace_distance(rho.matrix(), sigma.matrix());
}

double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix inner_m = sqrt_rho * sigma * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es2(0.5 * (inner_m + inner_m.adjoint()), Eigen::EigenvaluesOnly);
  return es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

PureState apply(const UnitaryOperator& u, const PureState& psi) {
  require_same_layout(u.layout(), psi.layout(), "apply");
  return PureState::normalized(psi.layout(), u.matrix() * psi.amplitudes());
}

PureState apply_on(const UnitaryOperator& u, const PureState& psi) {
  std::vector<std::size_t> targets;
  for (const auto& f : u.layout().factors()) {
    const auto pos = psi.layout().index_of(f.label);
    if (psi.layout().factors()[pos].dim != f.dim)
      throw LayoutError("apply_on: dimension mismatch on '" + f.label + "'");
    targets.push_back(pos);
  }
  const auto dims = psi.layout().dims();
  return PureState::normalized(psi.layout(),
                               kernels::apply_local(psi.amplitudes(), dims, targets, u.matrix()));
}

DensityOperator conjugate(const UnitaryOperator& u, const DensityOperator& rho) {
  require_same_layout(u.layout(), rho.layout(), "conjugate");
  Matrix m = u.matrix() * rho.matrix() * u.matrix().adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityOperator::trusted(rho.layout(), std::move(m));
}

UnitaryOperator extend_identity(const UnitaryOperator& u, const SubsystemLayout& extra) {
  const auto d = static_cast<Eigen::Index>(extra.total_dim());
  return UnitaryOperator(u.layout().concat(extra), kron(u.matrix(), Matrix::Identity(d, d)));
}

}  // namespace pointerlab
