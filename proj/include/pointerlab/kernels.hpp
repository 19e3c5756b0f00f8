#pragma once

// Index kernels over dense composite-space vectors and matrices. Each kernel
// has a plain serial reference (`*_serial`) kept for testing and
// benchmarking, and an OpenMP version used by the library. Both compute every
// output entry with the same summation order, so they agree bit-for-bit.

#include <cstddef>
#include <span>
#include <vector>

#include "pointerlab/states.hpp"

namespace pointerlab::kernels {

/// Offsets of the composite basis split into a selected group of factors and
/// its complement: full_index = selected[i] + rest[r]. Selected digits follow
/// the order of `selected_factors`; the rest follow layout order.
struct IndexSplit {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> rest;
};

IndexSplit split_indices(std::span<const std::size_t> dims,
                         std::span<const std::size_t> selected_factors);

/// Factor positions with keep[i] true, ascending.
std::vector<std::size_t> positions(const std::vector<bool>& keep);

Matrix partial_trace_pure_serial(const Vector& psi, std::span<const std::size_t> dims,
                                 const std::vector<bool>& keep);
Matrix partial_trace_pure(const Vector& psi, std::span<const std::size_t> dims,
                          const std::vector<bool>& keep);

Matrix partial_trace_mixed_serial(const Matrix& rho, std::span<const std::size_t> dims,
                                  const std::vector<bool>& keep);
Matrix partial_trace_mixed(const Matrix& rho, std::span<const std::size_t> dims,
                           const std::vector<bool>& keep);

/// Applies `op`, defined on the tensor product of `targets` (in the given
/// order), to psi and leaves every other factor untouched.
Vector apply_local_serial(const Vector& psi, std::span<const std::size_t> dims,
                          std::span<const std::size_t> targets, const Matrix& op);
Vector apply_local(const Vector& psi, std::span<const std::size_t> dims,
                   std::span<const std::size_t> targets, const Matrix& op);

}  // namespace pointerlab::kernels
