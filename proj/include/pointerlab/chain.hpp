#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointerlab/states.hpp"

namespace pointerlab::chain {

inline constexpr double kFactorizeTol = 1e-10;
inline constexpr double kProductTol = 1e-10;
inline constexpr double kBudgetTol = 1e-8;
/// Overlaps at or below this magnitude are treated as exactly zero (log = -inf).
inline constexpr double kZeroOverlap = 1e-12;

/// One imprinting step. The unitary acts on [source, label], where source is
/// the system or an earlier link (default: the system).
struct Link {
  std::string label;
  std::size_t dim = 0;
  UnitaryOperator unitary;
  std::optional<PureState> ready;  ///< default |0>
  std::string source;              ///< empty = system
};

class ChainConfig {
 public:
  /// Validates labels, dimensions and unitary layouts; throws LayoutError.
  ChainConfig(PureState v, PureState w, std::vector<Link> links);

  const PureState& v() const { return v_; }
  const PureState& w() const { return w_; }
  const std::vector<Link>& links() const { return links_; }
  const std::string& system_label() const { return v_.layout().factors().front().label; }
  /// [system, link_1, ..., link_n]
  const SubsystemLayout& global_layout() const { return global_; }
  PureState ready_state(std::size_t link) const;

 private:
  PureState v_;
  PureState w_;
  std::vector<Link> links_;
  SubsystemLayout global_;
};

struct Stage {
  std::string label;  ///< link applied at this stage ("init" for stage 0)
  cplx global_overlap = 0.0;
  /// Both branch states are products over all factors within 1e-10.
  bool factorizes = false;
  /// Per factor [system, links...]: cross-branch overlap of the extracted
  /// factor states (phases fixed so their product equals global_overlap).
  /// Empty unless factorizes.
  std::vector<cplx> factor_overlaps;
  /// Per factor Uhlmann root-fidelity of the two reduced branch states.
  std::vector<double> factor_fidelities;
};

struct ChainTrace {
  std::vector<std::string> factor_labels;  ///< [system, links...]
  cplx initial_overlap = 0.0;              ///< <v|w>
  std::vector<Stage> stages;               ///< links + 1 entries
  const Stage& final_stage() const { return stages.back(); }
};

ChainTrace run_chain(const ChainConfig& config);

/// Eq.-(5) style pair: lhs = <v|w>, rhs = product of final factor overlaps.
/// Throws NonFactorizing if the final stage is not a product.
std::pair<cplx, cplx> overlap_product_check(const ChainTrace& trace);

/// log2 |overlap|^2 or an explicit minus-infinity sentinel.
class LogTerm {
 public:
  static LogTerm finite(double v) { return LogTerm(v, false); }
  static LogTerm neg_inf() { return LogTerm(0.0, true); }
  static LogTerm of_overlap(double magnitude);

  bool is_neg_inf() const { return neg_inf_; }
  /// Only meaningful when !is_neg_inf().
  double value() const { return value_; }
  std::string str() const;  ///< "-inf" for the sentinel

 private:
  LogTerm(double v, bool ni) : value_(v), neg_inf_(ni) {}
  double value_;
  bool neg_inf_;
};

struct LedgerTerm {
  std::string label;
  double overlap_magnitude = 0.0;
  LogTerm log2_term = LogTerm::finite(0.0);
};

struct QualityLedger {
  std::vector<LedgerTerm> terms;  ///< system first, then links in order
  LogTerm budget = LogTerm::finite(0.0);
  /// Sum of terms matches the budget within 1e-8 (or both contain -inf).
  bool consistent = false;
  /// |sum - budget| when everything is finite, else 0.
  double closure_error = 0.0;
};

/// Throws NonFactorizing if the final stage is not a product.
QualityLedger quality_ledger(const ChainTrace& trace);

/// alpha v e1_v ... en_v + beta w e1_w ... en_w, normalized. Record labels
/// come from the record states' layouts. Throws InvalidArgument when there are
/// no fragments or the superposition has (near) zero norm.
PureState build_branching_state(cplx alpha, cplx beta, const PureState& v, const PureState& w,
                                const std::vector<std::pair<PureState, PureState>>& records);

/// CSV export; header: stage,label,sys_overlap_re,sys_overlap_im,record_overlap_mag,log2_term
std::string trace_csv(const ChainTrace& trace);
std::string ledger_csv(const ChainTrace& trace, const QualityLedger& ledger);

}  // namespace pointerlab::chain
