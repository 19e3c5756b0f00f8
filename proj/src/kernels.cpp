#include "pointerlab/kernels.hpp"

#include <cstdint>

#include "pointerlab/error.hpp"

namespace pointerlab::kernels {

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Offsets for a mixed-radix counter over `factors` (first factor slowest).
std::vector<std::size_t> offsets(std::span<const std::size_t> dims,
                                 std::span<const std::size_t> strides,
                                 std::span<const std::size_t> factors) {
  std::size_t count = 1;
  for (auto f : factors) count *= dims[f];
  std::vector<std::size_t> out(count, 0);
  std::size_t block = count;
  for (auto f : factors) {
    block /= dims[f];
    for (std::size_t i = 0; i < count; ++i) out[i] += ((i / block) % dims[f]) * strides[f];
  }
  return out;
}

std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

}  // namespace

std::vector<std::size_t> positions(const std::vector<bool>& keep) {
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) p.push_back(i);
  return p;
}

IndexSplit split_indices(std::span<const std::size_t> dims,
                         std::span<const std::size_t> selected_factors) {
  std::vector<bool> used(dims.size(), false);
  for (auto f : selected_factors) {
    if (f >= dims.size() || used[f]) throw LayoutError("split_indices: bad factor selection");
    used[f] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!used[i]) rest.push_back(i);
  const auto strides = strides_of(dims);
  return {offsets(dims, strides, selected_factors), offsets(dims, strides, rest)};
}

// Serial references: one flat loop, index arithmetic done digit by digit.

Matrix partial_trace_pure_serial(const Vector& psi, std::span<const std::size_t> dims,
                                 const std::vector<bool>& keep) {
  const auto kept = positions(keep);
  const auto split = split_indices(dims, kept);
  const auto dk = static_cast<Eigen::Index>(split.selected.size());
  Matrix rho = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t r : split.rest)
        acc += psi(static_cast<Eigen::Index>(split.selected[i] + r)) *
               std::conj(psi(static_cast<Eigen::Index>(split.selected[j] + r)));
      rho(i, j) = acc;
    }
  return rho;
}

Matrix partial_trace_pure(const Vector& psi, std::span<const std::size_t> dims,
                          const std::vector<bool>& keep) {
  const auto kept = positions(keep);
  const auto split = split_indices(dims, kept);
  const auto dk = static_cast<std::int64_t>(split.selected.size());
  const auto dr = static_cast<std::int64_t>(split.rest.size());
  // Gather into a kept x rest matrix so the inner loop is contiguous.
  Matrix m(dk, dr);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t r = 0; r < dr; ++r)
      m(i, r) = psi(static_cast<Eigen::Index>(split.selected[i] + split.rest[r]));
  Matrix rho(dk, dk);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::int64_t r = 0; r < dr; ++r) acc += m(i, r) * std::conj(m(j, r));
      rho(i, j) = acc;
    }
  return rho;
}

Matrix partial_trace_mixed_serial(const Matrix& rho, std::span<const std::size_t> dims,
                                  const std::vector<bool>& keep) {
  const auto kept = positions(keep);
  const auto split = split_indices(dims, kept);
  const auto dk = static_cast<Eigen::Index>(split.selected.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t r : split.rest)
        acc += rho(static_cast<Eigen::Index>(split.selected[i] + r),
                   static_cast<Eigen::Index>(split.selected[j] + r));
      out(i, j) = acc;
    }
  return out;
}

Matrix partial_trace_mixed(const Matrix& rho, std::span<const std::size_t> dims,
                           const std::vector<bool>& keep) {
  const auto kept = positions(keep);
  const auto split = split_indices(dims, kept);
  const auto dk = static_cast<std::int64_t>(split.selected.size());
  Matrix out(dk, dk);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t r : split.rest)
        acc += rho(static_cast<Eigen::Index>(split.selected[i] + r),
                   static_cast<Eigen::Index>(split.selected[j] + r));
      out(i, j) = acc;
    }
  return out;
}

Vector apply_local_serial(const Vector& psi, std::span<const std::size_t> dims,
                          std::span<const std::size_t> targets, const Matrix& op) {
  const auto split = split_indices(dims, targets);
  const auto dt = static_cast<Eigen::Index>(split.selected.size());
  if (op.rows() != dt || op.cols() != dt) throw LayoutError("apply_local: operator size mismatch");
  if (static_cast<std::size_t>(psi.size()) != product(dims)) throw LayoutError("apply_local: state size mismatch");
  Vector out = Vector::Zero(psi.size());
  for (std::size_t r : split.rest)
    for (Eigen::Index a = 0; a < dt; ++a) {
      cplx acc = 0.0;
      for (Eigen::Index b = 0; b < dt; ++b)
        acc += op(a, b) * psi(static_cast<Eigen::Index>(split.selected[b] + r));
      out(static_cast<Eigen::Index>(split.selected[a] + r)) = acc;
    }
  return out;
}

Vector apply_local(const Vector& psi, std::span<const std::size_t> dims,
                   std::span<const std::size_t> targets, const Matrix& op) {
  const auto split = split_indices(dims, targets);
  const auto dt = static_cast<Eigen::Index>(split.selected.size());
  if (op.rows() != dt || op.cols() != dt) throw LayoutError("apply_local: operator size mismatch");
  if (static_cast<std::size_t>(psi.size()) != product(dims)) throw LayoutError("apply_local: state size mismatch");
  Vector out(psi.size());
  const auto nr = static_cast<std::int64_t>(split.rest.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t ri = 0; ri < nr; ++ri) {
    const std::size_t r = split.rest[static_cast<std::size_t>(ri)];
    for (Eigen::Index a = 0; a < dt; ++a) {
      cplx acc = 0.0;
      for (Eigen::Index b = 0; b < dt; ++b)
        acc += op(a, b) * psi(static_cast<Eigen::Index>(split.selected[b] + r));
      out(static_cast<Eigen::Index>(split.selected[a] + r)) = acc;
    }
  }
  return out;
}

}  // namespace pointerlab::kernels
