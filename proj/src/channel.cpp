#include "pointerlab/channel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pointerlab/linalg.hpp"

namespace pointerlab::channel {

namespace {

std::string describe(const FeasibilityReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << "transfer spec is infeasible: max Gram deviation " << r.max_gram_deviation;
  if (r.offending_pair) os << " at branches (" << r.offending_pair->first << ", " << r.offending_pair->second << ")";
  return os.str();
}

Matrix input_columns(const TransferSpec& spec) {
  const auto& br = spec.branches();
  const auto dim = static_cast<Eigen::Index>(spec.joint_layout().total_dim());
  Matrix x(dim, static_cast<Eigen::Index>(br.size()));
  for (std::size_t i = 0; i < br.size(); ++i)
    x.col(static_cast<Eigen::Index>(i)) = tensor(br[i].in_sys, spec.ready()).amplitudes();
  return x;
}

Matrix output_columns(const TransferSpec& spec) {
  const auto& br = spec.branches();
  const auto dim = static_cast<Eigen::Index>(spec.joint_layout().total_dim());
  Matrix y(dim, static_cast<Eigen::Index>(br.size()));
  for (std::size_t i = 0; i < br.size(); ++i)
    y.col(static_cast<Eigen::Index>(i)) = tensor(br[i].out_sys, br[i].out_record).amplitudes();
  return y;
}

// Removes the components of v along the first `count` columns of q, twice.
void project_out(const Matrix& q, Eigen::Index count, Eigen::Ref<Vector> v) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index c = 0; c < count; ++c) v -= q.col(c).dot(v) * q.col(c);
}

// Extends orthonormal columns [0, k) of `frame` to a full basis using
// computational basis vectors in index order. A candidate is accepted when its
// residual exceeds 0.5/sqrt(d), which always leaves enough candidates.
void complete_frame(Matrix& frame, Eigen::Index k) {
  const Eigen::Index d = frame.rows();
  const double accept = 0.5 / std::sqrt(static_cast<double>(d));
  Eigen::Index filled = k;
  for (Eigen::Index i = 0; i < d && filled < d; ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    project_out(frame, filled, e);
    const double n = e.norm();
    if (n > accept) frame.col(filled++) = e / n;
  }
  if (filled < d) throw NumericalRankLoss("complete_to_unitary: basis completion failed");
}

}  // namespace

InfeasibleSpec::InfeasibleSpec(FeasibilityReport report)
    : Error(describe(report)), report_(std::move(report)) {}

TransferSpec::TransferSpec(SubsystemLayout system, SubsystemLayout apparatus, PureState ready,
                           std::vector<Branch> branches)
    : system_(std::move(system)),
      apparatus_(std::move(apparatus)),
      ready_(std::move(ready)),
      branches_(std::move(branches)) {
  (void)joint_layout();  // label collisions
  if (branches_.size() < 2) throw InvalidArgument("TransferSpec: at least two branches required");
  require_same_layout(ready_.layout(), apparatus_, "TransferSpec ready state");
  std::vector<PureState> ins;
  for (const auto& b : branches_) {
    require_same_layout(b.in_sys.layout(), system_, "TransferSpec in_sys");
    require_same_layout(b.out_sys.layout(), system_, "TransferSpec out_sys");
    require_same_layout(b.out_record.layout(), apparatus_, "TransferSpec out_record");
    ins.push_back(b.in_sys);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_matrix(ins), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > kRankTol))
    throw InvalidArgument("TransferSpec: input system states are not linearly independent");
}

Matrix gram_matrix(const std::vector<PureState>& states) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = inner(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
  return g;
}

FeasibilityReport check_feasibility(const TransferSpec& spec) {
  std::vector<PureState> pre, post;
  for (const auto& b : spec.branches()) {
    pre.push_back(tensor(b.in_sys, spec.ready()));
    post.push_back(tensor(b.out_sys, b.out_record));
  }
  const Matrix diff = gram_matrix(pre) - gram_matrix(post);
  FeasibilityReport report;
  std::pair<std::size_t, std::size_t> worst{0, 1};
  for (Eigen::Index i = 0; i < diff.rows(); ++i)
    for (Eigen::Index j = i; j < diff.cols(); ++j) {
      const double dev = std::abs(diff(i, j));
      if (dev > report.max_gram_deviation) {
        report.max_gram_deviation = dev;
        worst = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  report.feasible = report.max_gram_deviation <= kFeasibilityTol;
  if (!report.feasible) report.offending_pair = worst;
  return report;
}

UnitaryOperator complete_to_unitary(const TransferSpec& spec) {
  const auto report = check_feasibility(spec);
  if (!report.feasible) throw InfeasibleSpec(report);

  Matrix x = input_columns(spec);
  Matrix y = output_columns(spec);
  const Eigen::Index d = x.rows();
  const Eigen::Index k = x.cols();
  if (k > d) throw NumericalRankLoss("complete_to_unitary: more branches than dimensions");

  Matrix qx = Matrix::Zero(d, d);
  Matrix qy = Matrix::Zero(d, d);
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  for (Eigen::Index step = 0; step < k; ++step) {
    Eigen::Index pivot = -1;
    double best = -1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double n = x.col(j).norm();
      if (n > best) {  // strict: lowest index wins ties
        best = n;
        pivot = j;
      }
    }
    if (!(best > kRankTol)) throw NumericalRankLoss("complete_to_unitary: input span is degenerate");
    used[static_cast<std::size_t>(pivot)] = true;
    qx.col(step) = x.col(pivot) / best;
    qy.col(step) = y.col(pivot) / best;
    // Same elimination on both families keeps qy_i the image of qx_i.
    for (Eigen::Index j = 0; j < k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      for (int pass = 0; pass < 2; ++pass) {
        const cplx c = qx.col(step).dot(x.col(j));
        x.col(j) -= c * qx.col(step);
        y.col(j) -= c * qy.col(step);
      }
    }
  }
  // Consistent Gram data makes qy orthonormal up to the feasibility
  // tolerance; one more Gram-Schmidt pass brings it to rounding level.
  for (Eigen::Index c = 0; c < k; ++c) {
    Vector col = qy.col(c);
    project_out(qy, c, col);
    qy.col(c) = col / col.norm();
  }
  complete_frame(qx, k);
  complete_frame(qy, k);
  return UnitaryOperator(spec.joint_layout(), qy * qx.adjoint());
}

double verify_repeatability(const UnitaryOperator& u, const TransferSpec& spec) {
  require_same_layout(u.layout(), spec.joint_layout(), "verify_repeatability");
  const auto sys_labels = spec.system_layout().labels();
  double worst = 1.0;
  for (const auto& b : spec.branches()) {
    const PureState out = apply(u, tensor(b.in_sys, spec.ready()));
    const auto rho = partial_trace(out, sys_labels);
    const double f = b.in_sys.amplitudes().dot(rho.matrix() * b.in_sys.amplitudes()).real();
    worst = std::min(worst, f);
  }
  return worst;
}

double branch_mapping_error(const UnitaryOperator& u, const TransferSpec& spec) {
  require_same_layout(u.layout(), spec.joint_layout(), "branch_mapping_error");
  double worst = 0.0;
  for (const auto& b : spec.branches()) {
    const Vector got = u.matrix() * tensor(b.in_sys, spec.ready()).amplitudes();
    const Vector want = tensor(b.out_sys, b.out_record).amplitudes();
    worst = std::max(worst, (got - want).norm());
  }
  return worst;
}

}  // namespace pointerlab::channel
