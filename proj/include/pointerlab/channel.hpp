#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pointerlab/error.hpp"
#include "pointerlab/states.hpp"

namespace pointerlab::channel {

inline constexpr double kFeasibilityTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

struct Branch {
  PureState in_sys;
  PureState out_sys;
  PureState out_record;
};

/// Declarative transfer: in_sys_i (x) ready  ->  out_sys_i (x) out_record_i.
class TransferSpec {
 public:
  /// Validates: >= 2 branches, layouts consistent, in_sys family linearly
  /// independent (smallest Gram eigenvalue > 1e-10). Throws InvalidArgument
  /// or LayoutError.
  TransferSpec(SubsystemLayout system, SubsystemLayout apparatus, PureState ready,
               std::vector<Branch> branches);

  const SubsystemLayout& system_layout() const { return system_; }
  const SubsystemLayout& apparatus_layout() const { return apparatus_; }
  /// system (x) apparatus.
  SubsystemLayout joint_layout() const { return system_.concat(apparatus_); }
  const PureState& ready() const { return ready_; }
  const std::vector<Branch>& branches() const { return branches_; }

 private:
  SubsystemLayout system_;
  SubsystemLayout apparatus_;
  PureState ready_;
  std::vector<Branch> branches_;
};

struct FeasibilityReport {
  bool feasible = false;
  double max_gram_deviation = 0.0;
  /// Pair (i < j) attaining the deviation; set only when infeasible.
  std::optional<std::pair<std::size_t, std::size_t>> offending_pair;
};

/// Thrown by complete_to_unitary for specs that fail check_feasibility.
class InfeasibleSpec : public Error {
 public:
  explicit InfeasibleSpec(FeasibilityReport report);
  const FeasibilityReport& report() const { return report_; }

 private:
  FeasibilityReport report_;
};

/// Entry (i, j) = <states_i|states_j>.
Matrix gram_matrix(const std::vector<PureState>& states);

FeasibilityReport check_feasibility(const TransferSpec& spec);

/// Unitary on system (x) apparatus realizing every branch. The orthogonal
/// complement is filled deterministically: pivoted modified Gram-Schmidt on
/// the inputs, the same triangular change of basis on the outputs, then both
/// frames are extended with computational basis vectors in index order.
UnitaryOperator complete_to_unitary(const TransferSpec& spec);

/// Worst branch survival probability <in_sys|rho_sys|in_sys> after U acts on
/// in_sys (x) ready. For branches with out_sys == in_sys this is the
/// repeatability fidelity; otherwise it reports |<in_sys|out_sys>|^2.
double verify_repeatability(const UnitaryOperator& u, const TransferSpec& spec);

/// Largest deviation |U (in_i (x) ready) - out_i (x) record_i| over branches.
double branch_mapping_error(const UnitaryOperator& u, const TransferSpec& spec);

}  // namespace pointerlab::channel
