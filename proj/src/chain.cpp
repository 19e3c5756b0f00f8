#include "pointerlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pointerlab/error.hpp"
#include "pointerlab/io.hpp"
#include "pointerlab/linalg.hpp"

namespace pointerlab::chain {

ChainConfig::ChainConfig(PureState v, PureState w, std::vector<Link> links)
    : v_(std::move(v)), w_(std::move(w)), links_(std::move(links)), global_(v_.layout()) {
  require_same_layout(v_.layout(), w_.layout(), "ChainConfig branch states");
  if (v_.layout().size() != 1) throw LayoutError("ChainConfig: system must be a single factor");
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& link = links_[i];
    if (link.source.empty()) link.source = system_label();
    if (!global_.contains(link.source))
      throw LayoutError("link '" + link.label + "': source '" + link.source + "' is not the system or an earlier link");
    global_ = global_.concat(SubsystemLayout::single(link.label, link.dim));
    const SubsystemLayout expect{{link.source, global_.dim_of(link.source)}, {link.label, link.dim}};
    require_same_layout(link.unitary.layout(), expect, "link '" + link.label + "' unitary");
    if (link.ready) require_same_layout(link.ready->layout(), SubsystemLayout::single(link.label, link.dim),
                                        "link '" + link.label + "' ready state");
  }
}

PureState ChainConfig::ready_state(std::size_t link) const {
  const auto& l = links_.at(link);
  return l.ready ? *l.ready : PureState::basis(l.label, l.dim, 0);
}

namespace {

struct BranchFactors {
  bool factorizes = false;
  std::vector<Vector> factors;  // phase-consistent when factorizes
  std::vector<Matrix> reduced;
};

BranchFactors extract_factors(const PureState& phi) {
  BranchFactors out;
  const auto labels = phi.layout().labels();
  Vector product = Vector::Ones(1);
  for (const auto& label : labels) {
    const auto rho = partial_trace(phi, {label});
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    const Vector top = fix_phase(es.eigenvectors().col(es.eigenvectors().cols() - 1));
    Vector next(product.size() * top.size());
    for (Eigen::Index i = 0; i < product.size(); ++i) next.segment(i * top.size(), top.size()) = product(i) * top;
    product = std::move(next);
    out.factors.push_back(top);
    out.reduced.push_back(rho.matrix());
  }
  const cplx ov = product.dot(phi.amplitudes());
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
  out.factorizes = (phi.amplitudes() - phase * product).norm() <= kFactorizeTol;
  out.factors.front() *= phase;
  return out;
}

Stage snapshot(std::string label, const PureState& phi_v, const PureState& phi_w) {
  Stage s;
  s.label = std::move(label);
  s.global_overlap = inner(phi_v, phi_w);
  const auto fv = extract_factors(phi_v);
  const auto fw = extract_factors(phi_w);
  s.factorizes = fv.factorizes && fw.factorizes;
  for (std::size_t f = 0; f < fv.factors.size(); ++f) {
    s.factor_fidelities.push_back(std::min(1.0, uhlmann_fidelity(fv.reduced[f], fw.reduced[f])));
    if (s.factorizes) s.factor_overlaps.push_back(fv.factors[f].dot(fw.factors[f]));
  }
  return s;
}

}  // namespace

ChainTrace run_chain(const ChainConfig& config) {
  ChainTrace trace;
  trace.factor_labels = config.global_layout().labels();
  trace.initial_overlap = inner(config.v(), config.w());

  PureState phi_v = config.v();
  PureState phi_w = config.w();
  for (std::size_t i = 0; i < config.links().size(); ++i) {
    phi_v = tensor(phi_v, config.ready_state(i));
    phi_w = tensor(phi_w, config.ready_state(i));
  }
  trace.stages.push_back(snapshot("init", phi_v, phi_w));
  for (const auto& link : config.links()) {
    phi_v = apply_on(link.unitary, phi_v);
    phi_w = apply_on(link.unitary, phi_w);
    trace.stages.push_back(snapshot(link.label, phi_v, phi_w));
  }
  return trace;
}

std::pair<cplx, cplx> overlap_product_check(const ChainTrace& trace) {
  const auto& fin = trace.final_stage();
  if (!fin.factorizes) throw NonFactorizing("overlap_product_check: final branch states are entangled across links");
  cplx rhs = 1.0;
  for (const auto& z : fin.factor_overlaps) rhs *= z;
  return {trace.initial_overlap, rhs};
}

LogTerm LogTerm::of_overlap(double magnitude) {
  if (magnitude <= kZeroOverlap) return neg_inf();
  return finite(2.0 * std::log2(magnitude));
}

std::string LogTerm::str() const { return neg_inf_ ? std::string("-inf") : io::format_real(value_); }

QualityLedger quality_ledger(const ChainTrace& trace) {
  const auto& fin = trace.final_stage();
  if (!fin.factorizes) throw NonFactorizing("quality_ledger: final branch states are entangled across links");
  QualityLedger ledger;
  bool any_inf = false;
  double sum = 0.0;
  for (std::size_t f = 0; f < fin.factor_overlaps.size(); ++f) {
    const double mag = std::abs(fin.factor_overlaps[f]);
    LedgerTerm t{trace.factor_labels[f], mag, LogTerm::of_overlap(mag)};
    if (t.log2_term.is_neg_inf())
      any_inf = true;
    else
      sum += t.log2_term.value();
    ledger.terms.push_back(std::move(t));
  }
  ledger.budget = LogTerm::of_overlap(std::abs(trace.initial_overlap));
  if (ledger.budget.is_neg_inf()) {
    ledger.consistent = any_inf;
  } else if (any_inf) {
    ledger.consistent = false;
  } else {
    ledger.closure_error = std::abs(sum - ledger.budget.value());
    ledger.consistent = ledger.closure_error <= kBudgetTol;
  }
  return ledger;
}

PureState build_branching_state(cplx alpha, cplx beta, const PureState& v, const PureState& w,
                                const std::vector<std::pair<PureState, PureState>>& records) {
  if (records.empty()) throw InvalidArgument("build_branching_state: at least one fragment required");
  require_same_layout(v.layout(), w.layout(), "build_branching_state system states");
  PureState bv = v;
  PureState bw = w;
  for (const auto& [ev, ew] : records) {
    require_same_layout(ev.layout(), ew.layout(), "build_branching_state record pair");
    bv = tensor(bv, ev);
    bw = tensor(bw, ew);
  }
  const Vector sum = alpha * bv.amplitudes() + beta * bw.amplitudes();
  if (!(sum.norm() > 1e-12)) throw InvalidArgument("build_branching_state: superposition is not normalizable");
  return PureState::normalized(bv.layout(), sum);
}

namespace {

void csv_row(std::ostringstream& os, std::size_t stage, const std::string& label, cplx sys, double mag,
             const LogTerm& term) {
  os << stage << ',' << label << ',' << io::format_real(sys.real()) << ',' << io::format_real(sys.imag()) << ','
     << io::format_real(mag) << ',' << term.str() << '\n';
}

constexpr const char* kHeader = "stage,label,sys_overlap_re,sys_overlap_im,record_overlap_mag,log2_term\n";

}  // namespace

std::string trace_csv(const ChainTrace& trace) {
  std::ostringstream os;
  os << kHeader;
  for (std::size_t k = 0; k < trace.stages.size(); ++k) {
    const auto& s = trace.stages[k];
    const cplx sys = s.factorizes ? s.factor_overlaps.front() : cplx(s.factor_fidelities.front());
    // Stage k applied link k, which is factor k of the global layout.
    const double mag = k == 0 ? 1.0 : s.factorizes ? std::abs(s.factor_overlaps[k]) : s.factor_fidelities[k];
    csv_row(os, k, s.label, sys, mag, LogTerm::of_overlap(mag));
  }
  return os.str();
}

std::string ledger_csv(const ChainTrace& trace, const QualityLedger& ledger) {
  std::ostringstream os;
  os << kHeader;
  const auto& fin = trace.final_stage();
  const std::size_t last = trace.stages.size() - 1;
  for (std::size_t f = 0; f < ledger.terms.size(); ++f) {
    const auto& t = ledger.terms[f];
    csv_row(os, f == 0 ? last : f, t.label, fin.factor_overlaps.front(), t.overlap_magnitude, t.log2_term);
  }
  csv_row(os, 0, "budget", trace.initial_overlap, std::abs(trace.initial_overlap), ledger.budget);
  return os.str();
}

}  // namespace pointerlab::chain
