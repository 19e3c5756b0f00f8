#include "pointerlab/verifiers.hpp"

#include <cmath>
#include <cstdio>

#include "pointerlab/error.hpp"
#include "pointerlab/linalg.hpp"

namespace pointerlab::verify {

std::string_view to_string(Dichotomy tag) {
  switch (tag) {
    case Dichotomy::NoRecord: return "NoRecord";
    case Dichotomy::OrthogonalOutcomes: return "OrthogonalOutcomes";
    case Dichotomy::Violation: return "Violation";
  }
  return "?";
}

double norm_residual(cplx alpha, cplx beta, const PureState& v, const PureState& w,
                     const PureState& av, const PureState& aw) {
  require_same_layout(v.layout(), w.layout(), "norm_residual system states");
  require_same_layout(av.layout(), aw.layout(), "norm_residual records");
  const Vector psi = alpha * v.amplitudes() + beta * w.amplitudes();
  const Vector phi = alpha * tensor(v, av).amplitudes() + beta * tensor(w, aw).amplitudes();
  return std::abs(psi.squaredNorm() - phi.squaredNorm());
}

DichotomyVerdict classify_dichotomy(const PureState& v, const PureState& w,
                                    const PureState& av, const PureState& aw) {
  const cplx vw = inner(v, w);
  const cplx rec = inner(av, aw);
  DichotomyVerdict out;
  out.residual = std::abs(vw * (1.0 - rec));
  if (out.residual > kVerdictTol)
    out.tag = Dichotomy::Violation;
  else if (std::abs(vw) <= kVerdictTol)
    out.tag = Dichotomy::OrthogonalOutcomes;
  else
    out.tag = Dichotomy::NoRecord;
  return out;
}

namespace {

// (<s| (x) 1) |phi> for a state phi on [system..., rest...].
Vector project_system(const PureState& s, const Vector& phi) {
  const auto ds = static_cast<Eigen::Index>(s.dim());
  const Eigen::Index dr = phi.size() / ds;
  Vector out = Vector::Zero(dr);
  for (Eigen::Index i = 0; i < ds; ++i) out += std::conj(s.amplitudes()(i)) * phi.segment(i * dr, dr);
  return out;
}

}  // namespace

PurifiedResult purified_residual(const DensityOperator& rho0, const UnitaryOperator& u,
                                 const PureState& v, const PureState& w) {
  require_same_layout(v.layout(), w.layout(), "purified_residual system states");
  const auto expected = v.layout().concat(rho0.layout());
  require_same_layout(u.layout(), expected, "purified_residual unitary");

  const PureState a0 = purify(rho0);
  const auto ghost = a0.layout().complement(rho0.layout().labels());
  const UnitaryOperator big = extend_identity(u, ghost);

  const PureState phi_v = apply(big, tensor(v, a0));
  const PureState phi_w = apply(big, tensor(w, a0));
  const Vector rec_v = project_system(v, phi_v.amplitudes());
  const Vector rec_w = project_system(w, phi_w.amplitudes());
  // Survival <s|rho_S|s> equals |(<s| (x) 1)|phi>|^2 for these pure branches.
  if (1.0 - rec_v.squaredNorm() > kPreservationTol || 1.0 - rec_w.squaredNorm() > kPreservationTol)
    throw NotRepeatable("purified_residual: U does not preserve the outcome states");

  PurifiedResult out;
  out.record_overlap = rec_v.normalized().dot(rec_w.normalized());
  out.residual = std::abs(inner(v, w) * (1.0 - out.record_overlap));
  return out;
}

InvariantGap mixed_invariant_gap(const DensityOperator& rho0, const DensityOperator& rho_v,
                                 const DensityOperator& rho_w) {
  require_same_layout(rho0.layout(), rho_v.layout(), "mixed_invariant_gap");
  require_same_layout(rho0.layout(), rho_w.layout(), "mixed_invariant_gap");
  const Eigen::VectorXd s0 = spectrum(rho0.matrix());
  if ((spectrum(rho_v.matrix()) - s0).cwiseAbs().maxCoeff() > kSpectrumTol ||
      (spectrum(rho_w.matrix()) - s0).cwiseAbs().maxCoeff() > kSpectrumTol)
    throw SpectrumMismatch("mixed_invariant_gap: states are not unitarily related");
  InvariantGap gap;
  gap.lhs = hs_inner(rho0, rho0) - hs_inner(rho_v, rho_w);
  const Matrix diff = rho_v.matrix() - rho_w.matrix();
  gap.rhs = 0.5 * (diff * diff).trace().real();
  return gap;
}

std::string report_line(const DichotomyVerdict& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "verdict=%s residual=%.12e", std::string(to_string(v.tag)).c_str(),
                v.residual);
  return buf;
}

}  // namespace pointerlab::verify
