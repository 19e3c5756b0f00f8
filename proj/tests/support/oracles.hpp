#pragma once

// Slow, independent reference computations for tests. Nothing here uses the
// library's index kernels.

#include <span>
#include <utility>
#include <vector>

#include "pointerlab/random.hpp"
#include "pointerlab/states.hpp"

namespace oracle {

using pointerlab::cplx;
using pointerlab::Matrix;
using pointerlab::Vector;

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Mixed-radix digits of a composite index, leftmost factor slowest.
std::vector<std::size_t> digits(std::size_t index, std::span<const std::size_t> dims);

Matrix partial_trace(const Matrix& rho, std::span<const std::size_t> dims, const std::vector<bool>& keep);
Matrix partial_trace(const Vector& psi, std::span<const std::size_t> dims, const std::vector<bool>& keep);

/// Full-space matrix of `op` acting on `targets` (in that order).
Matrix embed(const Matrix& op, std::span<const std::size_t> dims, std::span<const std::size_t> targets);

/// Shannon entropy in bits of a probability vector (zeros skipped).
double shannon_bits(const std::vector<double>& p);

/// Pair of unit vectors in a dim-d space with <a|b> == overlap, rotated by a
/// Haar unitary.
std::pair<Vector, Vector> pair_with_overlap(std::size_t dim, cplx overlap, pointerlab::Rng& rng);

}  // namespace oracle
