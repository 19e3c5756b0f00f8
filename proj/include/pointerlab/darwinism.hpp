#pragma once

// Quantum Darwinism observables on global pure states. These metrics read
// reduced density operators as probability-bearing states (entropies, mutual
// information), i.e. they sit downstream of the standard probability rule.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pointerlab/linalg.hpp"

namespace pointerlab::darwinism {

inline constexpr double kEntropyTol = 1e-9;
inline constexpr std::size_t kExhaustive = std::numeric_limits<std::size_t>::max();

struct FragmentSpec {
  LabelSet labels;
};

/// Entropy of the reduced state on `labels`. For a pure global state this
/// equals the entropy of the complement, so the smaller side is diagonalized.
double subset_entropy(const PureState& global, const LabelSet& labels);

/// I(S:F) = H(S) + H(F) - H(SF), bits. Empty fragment gives 0.
double mutual_information(const PureState& global, const FragmentSpec& fragment,
                          const std::string& system = "S");

struct CurvePoint {
  std::size_t fragment_size = 0;
  double mean_bits = 0.0;
  double min_bits = 0.0;
  double max_bits = 0.0;
  std::size_t samples = 0;
};

struct PartialInfoCurve {
  std::size_t environment_size = 0;
  double system_entropy = 0.0;
  std::vector<CurvePoint> points;  ///< fragment sizes 0..n
};

/// Averages I(S:F) over min(samples_per_size, C(n, m)) distinct fragments of
/// each size m; exhaustive (lexicographic) when C(n, m) fits the cap,
/// otherwise sampled without replacement from a stream seeded by (seed, m).
PartialInfoCurve partial_info_curve(const PureState& global, std::size_t samples_per_size,
                                    std::uint64_t seed, const std::string& system = "S");

/// n / m_delta for the smallest m with mean I >= (1 - delta) H(S); 0 if no
/// size qualifies. Throws DegenerateSystem when H(S) <= 1e-9.
double redundancy(const PartialInfoCurve& curve, double delta);
double redundancy(const PureState& global, double delta, std::size_t samples_per_size = kExhaustive,
                  std::uint64_t seed = 0, const std::string& system = "S");

/// Smallest qualifying fragment size (0 when none); same rules as redundancy.
std::size_t minimal_fragment_size(const PartialInfoCurve& curve, double delta);

struct DiscordResult {
  double discord = 0.0;
  double mutual_information = 0.0;
  double classical_correlation = 0.0;
  double theta = 0.0;  ///< optimal measurement direction (Bloch polar angle)
  double phi = 0.0;
};

/// Discord with projective measurements on the qubit `measured`: 64 x 64
/// angle grid then three rounds of golden-section refinement in each angle.
/// Throws UnsupportedDimension when the measured factor is not a qubit.
DiscordResult quantum_discord_full(const DensityOperator& rho, const std::string& measured);
double quantum_discord(const DensityOperator& rho, const std::string& measured);

struct SchmidtPointerGap {
  /// Angle between the Schmidt basis of rho_S and the pointer basis, in [0, pi/4].
  double angle = 0.0;
  /// |<e_v|e_w>| of the relative record states conditioned on each pointer
  /// state; empty if either branch has zero weight.
  std::optional<double> record_overlap;
};

/// Throws UnsupportedDimension unless the system is a qubit, InvalidArgument
/// unless the pointer pair is orthonormal, DegenerateSchmidt when the rho_S
/// eigenvalues are within 1e-9.
SchmidtPointerGap schmidt_pointer_gap(const PureState& global, const PureState& pointer0,
                                      const PureState& pointer1, const std::string& system = "S");

/// CSV header: fragment_size,mean_bits,min_bits,max_bits,samples
std::string curve_csv(const PartialInfoCurve& curve);

}  // namespace pointerlab::darwinism
