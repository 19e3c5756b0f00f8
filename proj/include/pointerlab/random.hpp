#pragma once

#include <cstdint>
#include <random>

#include "pointerlab/states.hpp"

namespace pointerlab {

using Rng = std::mt19937_64;

/// splitmix64 mix of (seed, stream, index); gives independent per-trial seeds
/// so ensemble loops reproduce for any thread count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Ginibre matrix with iid standard complex normal entries.
Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols);

PureState random_pure(const SubsystemLayout& layout, Rng& rng);
PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed);

/// Haar unitary: QR of a Ginibre matrix, columns rephased by diag(R)/|diag(R)|.
UnitaryOperator random_unitary(const SubsystemLayout& layout, Rng& rng);
UnitaryOperator random_unitary(const SubsystemLayout& layout, std::uint64_t seed);

/// G G^dag / Tr for a dim x rank Ginibre G. Throws InvalidArgument if
/// rank is 0 or exceeds the dimension.
DensityOperator random_density(const SubsystemLayout& layout, std::size_t rank, Rng& rng);
DensityOperator random_density(const SubsystemLayout& layout, std::size_t rank, std::uint64_t seed);

/// Uniform real in [0, 1).
double uniform01(Rng& rng);

}  // namespace pointerlab
