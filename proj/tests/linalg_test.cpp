#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pointerlab/error.hpp"
#include "pointerlab/linalg.hpp"
#include "pointerlab/random.hpp"

using namespace pointerlab;

namespace {
const SubsystemLayout kS = SubsystemLayout::single("S", 2);
const SubsystemLayout kA = SubsystemLayout::single("A", 3);
const SubsystemLayout kE = SubsystemLayout::single("E", 2);
}  // namespace

TEST(Linalg, TensorMatchesKron) {
  const auto a = random_pure(kS, 1), b = random_pure(kA, 2);
  const auto ab = tensor(a, b);
  EXPECT_EQ(ab.layout(), kS.concat(kA));
  EXPECT_LT((ab.amplitudes() - oracle::kron(a.amplitudes(), b.amplitudes())).norm(), 1e-15);
  const auto ra = random_density(kS, 2, 3), rb = random_density(kA, 2, 4);
  EXPECT_LT((tensor(ra, rb).matrix() - oracle::kron(ra.matrix(), rb.matrix())).norm(), 1e-15);
  EXPECT_THROW(tensor(a, a), LayoutError);
}

TEST(Linalg, PartialTraceOfProductReturnsFactor) {
  const auto a = random_pure(kS, 5), b = random_pure(kA, 6), c = random_pure(kE, 7);
  const std::vector<PureState> parts{a, b, c};
  const auto abc = tensor_all(parts);
  const auto rb = partial_trace(abc, {"A"});
  EXPECT_EQ(rb.layout(), kA);
  EXPECT_LT((rb.matrix() - b.amplitudes() * b.amplitudes().adjoint()).norm(), 1e-14);
  const auto rac = partial_trace(DensityOperator::from_pure(abc), {"E", "S"});
  EXPECT_EQ(rac.layout(), kS.concat(kE));
  EXPECT_THROW(partial_trace(abc, {}), InvalidArgument);
  EXPECT_THROW(partial_trace(abc, {"Q"}), LayoutError);
}

TEST(Linalg, PartialTraceTraceAndPositivity) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto psi = random_pure(kS.concat(kA).concat(kE), s);
    const auto r = partial_trace(psi, {"A", "E"});
    EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(spectrum(r.matrix()).minCoeff(), 0.0);
  }
}

TEST(Linalg, EntropyOfKnownSpectrum) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.7;
  m(1, 1) = 0.3;
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(kS, m)), oracle::shannon_bits({0.7, 0.3}), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(kS, m)), 0.8812908992306927, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(kA)), std::log2(3.0), 1e-12);
  EXPECT_EQ(von_neumann_entropy(DensityOperator::from_pure(random_pure(kA, 1))), 0.0);
}

TEST(Linalg, EntropyInvariantUnderConjugation) {
  const auto rho = random_density(kA, 2, 8);
  const auto u = random_unitary(kA, 9);
  EXPECT_NEAR(von_neumann_entropy(conjugate(u, rho)), von_neumann_entropy(rho), 1e-12);
}

TEST(Linalg, PurifyReproducesState) {
  for (std::size_t rank = 1; rank <= 3; ++rank) {
    const auto rho = random_density(kA, rank, 10 + rank);
    const auto phi = purify(rho);
    ASSERT_EQ(phi.layout().size(), 2u);
    EXPECT_EQ(phi.layout().factors()[1].label, "A'");
    EXPECT_EQ(phi.layout().factors()[1].dim, 3u);
    EXPECT_LT((partial_trace(phi, {"A"}).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    // Ghost marginal has the same spectrum.
    EXPECT_LT((spectrum(partial_trace(phi, {"A'"}).matrix()) - spectrum(rho.matrix())).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_EQ(purify(random_density(kA, 2, 1), "G").layout().factors()[1].label, "G");
}

TEST(Linalg, PurifyIsDeterministic) {
  const auto rho = random_density(kA, 3, 21);
  EXPECT_TRUE(purify(rho).amplitudes() == purify(rho).amplitudes());
}

TEST(Linalg, TraceDistanceAndFidelityOnPureStates) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = random_pure(kA, 2 * s), b = random_pure(kA, 2 * s + 1);
    const double ov = std::abs(inner(a, b));
    const auto ra = DensityOperator::from_pure(a), rb = DensityOperator::from_pure(b);
    EXPECT_NEAR(trace_distance(ra, rb), std::sqrt(1.0 - ov * ov), 1e-12);
    EXPECT_NEAR(uhlmann_fidelity(ra.matrix(), rb.matrix()), ov, 1e-7);
  }
}

TEST(Linalg, HilbertSchmidtInner) {
  const auto a = random_pure(kS, 1), b = random_pure(kS, 2);
  EXPECT_NEAR(hs_inner(DensityOperator::from_pure(a), DensityOperator::from_pure(b)), std::norm(inner(a, b)), 1e-14);
}

TEST(Linalg, ApplyOnSelectsFactorsByLabel) {
  const auto layout = kS.concat(kA).concat(kE);
  const auto psi = random_pure(layout, 3);
  const auto u = random_unitary(SubsystemLayout{{"E", 2}, {"S", 2}}, 4);
  const std::size_t targets[] = {2, 0};
  const Vector want = oracle::embed(u.matrix(), layout.dims(), targets) * psi.amplitudes();
  EXPECT_LT((apply_on(u, psi).amplitudes() - want).norm(), 1e-14);
  EXPECT_THROW(apply(u, psi), LayoutError);
}

TEST(Linalg, ExtendIdentity) {
  const auto u = random_unitary(kS, 1);
  const auto ue = extend_identity(u, kA);
  EXPECT_LT((ue.matrix() - oracle::kron(u.matrix(), Matrix::Identity(3, 3))).norm(), 1e-15);
}

TEST(Linalg, FixPhaseConvention) {
  Vector v(3);
  v << cplx(0.1, 0.2), cplx(0.0, -0.6), cplx(0.3, 0.0);
  const Vector f = fix_phase(v);
  EXPECT_NEAR(f(1).imag(), 0.0, 1e-15);
  EXPECT_GT(f(1).real(), 0.0);
  EXPECT_NEAR((f - v * (f(1) / v(1))).norm(), 0.0, 1e-15);
  // Ties resolve to the lowest index.
  Vector t(2);
  t << cplx(0.0, 1.0), cplx(-1.0, 0.0);
  EXPECT_NEAR(fix_phase(t)(0).real(), 1.0, 1e-15);
}
