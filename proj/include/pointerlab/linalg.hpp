#pragma once

#include <span>
#include <string>
#include <vector>

#include "pointerlab/states.hpp"

namespace pointerlab {

using LabelSet = std::vector<std::string>;

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
UnitaryOperator tensor(const UnitaryOperator& a, const UnitaryOperator& b);
/// Left-to-right tensor product of a nonempty list.
PureState tensor_all(std::span<const PureState> parts);

DensityOperator partial_trace(const PureState& psi, const LabelSet& keep);
DensityOperator partial_trace(const DensityOperator& rho, const LabelSet& keep);

/// Purification on [layout..., ghost] with the ghost factor as large as the
/// original space. Amplitudes are sqrt(p_k) in descending eigenvalue order;
/// each eigenvector is phased so its largest-magnitude entry (lowest index on
/// ties) is real positive. Ghost label defaults to the joined labels plus "'".
PureState purify(const DensityOperator& rho, std::string ghost_label = {});

/// <a|b>, conjugate-linear in a.
cplx inner(const PureState& a, const PureState& b);
/// Tr(rho sigma).
double hs_inner(const DensityOperator& rho, const DensityOperator& sigma);

/// Hermitian eigenvalues ascending, entries below 1e-12 in magnitude clamped to 0.
Eigen::VectorXd spectrum(const Matrix& hermitian);
/// -sum lambda log2 lambda, bits.
double von_neumann_entropy(const DensityOperator& rho);
double entropy_bits(const Matrix& hermitian);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);
/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) (root-fidelity, equals
/// |<a|b>| for pure inputs).
double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma);

PureState apply(const UnitaryOperator& u, const PureState& psi);
/// Applies u to the factors of psi named by u's layout labels (in u's order).
PureState apply_on(const UnitaryOperator& u, const PureState& psi);
DensityOperator conjugate(const UnitaryOperator& u, const DensityOperator& rho);

/// u tensor identity on `extra`.
UnitaryOperator extend_identity(const UnitaryOperator& u, const SubsystemLayout& extra);

/// Multiplies by the phase that makes the largest-magnitude entry real
/// positive (lowest index among entries within 1e-12 of the maximum).
Vector fix_phase(const Vector& v);

}  // namespace pointerlab
