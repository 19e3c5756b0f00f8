#pragma once

#include <string>
#include <string_view>

#include "pointerlab/states.hpp"

namespace pointerlab::verify {

inline constexpr double kVerdictTol = 1e-10;
inline constexpr double kSpectrumTol = 1e-8;
inline constexpr double kPreservationTol = 1e-8;

enum class Dichotomy { NoRecord, OrthogonalOutcomes, Violation };

std::string_view to_string(Dichotomy tag);

struct DichotomyVerdict {
  Dichotomy tag = Dichotomy::NoRecord;
  /// |<v|w>| * |1 - <Av|Aw>|
  double residual = 0.0;
};

/// Norm change |<psi|psi> - <Phi|Phi>| between psi = alpha v + beta w and
/// Phi = alpha v Av + beta w Aw. alpha and beta are taken as given, so
/// unnormalized superpositions report their residual too.
double norm_residual(cplx alpha, cplx beta, const PureState& v, const PureState& w,
                     const PureState& av, const PureState& aw);

/// Grades claimed post-measurement records. Violation when the residual
/// exceeds 1e-10, else OrthogonalOutcomes when |<v|w>| <= 1e-10, else NoRecord.
DichotomyVerdict classify_dichotomy(const PureState& v, const PureState& w,
                                    const PureState& av, const PureState& aw);

struct PurifiedResult {
  double residual = 0.0;
  /// <A_v|A_w> between the purified (apparatus + ghost) records.
  cplx record_overlap = 0.0;
};

/// Purifies the apparatus state rho0 with a ghost partner, runs U (x) 1 on
/// v (x) A0 and w (x) A0, and evaluates |<v|w>(1 - <A_v|A_w>)| for the
/// purified records. U acts on [system..., apparatus...] where the apparatus
/// factors match rho0's layout. Throws NotRepeatable if either branch leaves
/// the system state with survival below 1 - 1e-8.
PurifiedResult purified_residual(const DensityOperator& rho0, const UnitaryOperator& u,
                                 const PureState& v, const PureState& w);

struct InvariantGap {
  double lhs = 0.0;  ///< Tr rho0^2 - Tr rho_v rho_w
  double rhs = 0.0;  ///< 1/2 Tr (rho_v - rho_w)^2
};

/// Throws SpectrumMismatch if rho_v or rho_w is not isospectral with rho0
/// within 1e-8.
InvariantGap mixed_invariant_gap(const DensityOperator& rho0, const DensityOperator& rho_v,
                                 const DensityOperator& rho_w);

/// Line-oriented report entry, e.g. "verdict=NoRecord residual=0.000000000000e+00".
std::string report_line(const DichotomyVerdict& v);

}  // namespace pointerlab::verify
