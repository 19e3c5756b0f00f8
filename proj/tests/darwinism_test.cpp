#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "pointerlab/chain.hpp"
#include "pointerlab/darwinism.hpp"
#include "pointerlab/error.hpp"
#include "pointerlab/linalg.hpp"

using namespace pointerlab;
using darwinism::FragmentSpec;

namespace {

const auto kS = SubsystemLayout::single("S", 2);

PureState qubit(const std::string& label, double a0, double a1) {
  Vector x(2);
  x << a0, a1;
  return PureState::normalized(SubsystemLayout::single(label, 2), x);
}

PureState branching(double alpha2, double c, std::size_t n) {
  std::vector<std::pair<PureState, PureState>> rec;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::string l = "E" + std::to_string(k);
    rec.emplace_back(qubit(l, 1, 0), qubit(l, c, std::sqrt(1 - c * c)));
  }
  return chain::build_branching_state(std::sqrt(alpha2), std::sqrt(1 - alpha2), PureState::basis(kS, 0),
                                      PureState::basis(kS, 1), rec);
}

double oracle_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  std::vector<double> p;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) p.push_back(std::max(0.0, es.eigenvalues()(i)));
  return oracle::shannon_bits(p);
}

double oracle_mi(const PureState& g, const std::vector<std::size_t>& frag) {
  const auto dims = g.layout().dims();
  std::vector<bool> s(dims.size(), false), f(dims.size(), false), sf(dims.size(), false);
  s[0] = sf[0] = true;
  for (auto i : frag) f[i] = sf[i] = true;
  return oracle_entropy(oracle::partial_trace(g.amplitudes(), dims, s)) +
         oracle_entropy(oracle::partial_trace(g.amplitudes(), dims, f)) -
         oracle_entropy(oracle::partial_trace(g.amplitudes(), dims, sf));
}

DensityOperator two_qubit(const Matrix& m) { return DensityOperator(SubsystemLayout{{"S", 2}, {"A", 2}}, m); }

}  // namespace

TEST(MutualInformation, ProductStateIsZero) {
  const auto g = tensor(random_pure(kS, 1), tensor(random_pure(SubsystemLayout::single("E1", 2), 2),
                                                   random_pure(SubsystemLayout::single("E2", 3), 3)));
  EXPECT_NEAR(darwinism::mutual_information(g, {{"E1"}}), 0.0, 1e-9);
  EXPECT_NEAR(darwinism::mutual_information(g, {{"E1", "E2"}}), 0.0, 1e-9);
  const auto curve = darwinism::partial_info_curve(g, 10, 1);
  for (const auto& p : curve.points) EXPECT_NEAR(p.mean_bits, 0.0, 1e-9);
  EXPECT_THROW(darwinism::redundancy(g, 0.1), DegenerateSystem);
}

TEST(MutualInformation, PerfectRecords) {
  const auto g = branching(0.5, 0.0, 4);
  EXPECT_NEAR(darwinism::mutual_information(g, {{"E2"}}), 1.0, 1e-9);
  EXPECT_NEAR(darwinism::mutual_information(g, {{"E1", "E3", "E4"}}), 1.0, 1e-9);
  EXPECT_NEAR(darwinism::mutual_information(g, {{"E1", "E2", "E3", "E4"}}), 2.0, 1e-9);
  EXPECT_EQ(darwinism::mutual_information(g, {{}}), 0.0);
  EXPECT_THROW(darwinism::mutual_information(g, {{"E9"}}), LayoutError);
}

TEST(MutualInformation, MatchesOracleOnRandomStates) {
  SubsystemLayout l{{"S", 2}, {"E1", 2}, {"E2", 3}, {"E3", 2}};
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = random_pure(l, s);
    EXPECT_NEAR(darwinism::mutual_information(g, {{"E1"}}), oracle_mi(g, {1}), 1e-10);
    EXPECT_NEAR(darwinism::mutual_information(g, {{"E3", "E2"}}), oracle_mi(g, {2, 3}), 1e-10);
    const double hs = darwinism::subset_entropy(g, {"S"});
    EXPECT_NEAR(darwinism::mutual_information(g, {{"E1", "E2", "E3"}}), 2.0 * hs, 1e-9);
    // Monotone under fragment inclusion.
    EXPECT_LE(darwinism::mutual_information(g, {{"E1"}}), darwinism::mutual_information(g, {{"E1", "E3"}}) + 1e-9);
  }
}

TEST(PartialInfoCurve, PerfectRecordsPlateau) {
  const auto curve = darwinism::partial_info_curve(branching(0.5, 0.0, 8), darwinism::kExhaustive, 0);
  ASSERT_EQ(curve.points.size(), 9u);
  EXPECT_NEAR(curve.system_entropy, 1.0, 1e-12);
  EXPECT_EQ(curve.points[0].mean_bits, 0.0);
  for (std::size_t m = 1; m < 8; ++m) {
    EXPECT_NEAR(curve.points[m].min_bits, 1.0, 1e-9);
    EXPECT_NEAR(curve.points[m].max_bits, 1.0, 1e-9);
  }
  EXPECT_NEAR(curve.points[8].mean_bits, 2.0, 1e-9);
  EXPECT_EQ(curve.points[4].samples, 70u);
  EXPECT_EQ(darwinism::redundancy(curve, 0.01), 8.0);
  EXPECT_EQ(darwinism::minimal_fragment_size(curve, 0.01), 1u);
}

TEST(PartialInfoCurve, ImperfectRecordsExhaustiveOracle) {
  const auto g = branching(0.5, 0.8, 4);
  const auto curve = darwinism::partial_info_curve(g, darwinism::kExhaustive, 0);
  // Symmetric records: every fragment of size m has the same information.
  for (std::size_t m = 1; m <= 4; ++m) {
    std::vector<std::size_t> frag;
    for (std::size_t i = 1; i <= m; ++i) frag.push_back(i);
    EXPECT_NEAR(curve.points[m].mean_bits, oracle_mi(g, frag), 1e-10);
  }
  for (std::size_t m = 1; m < 3; ++m) EXPECT_LT(curve.points[m].mean_bits, curve.points[m + 1].mean_bits);
  std::size_t want = 0;
  for (std::size_t m = 1; m <= 4 && want == 0; ++m)
    if (curve.points[m].mean_bits >= 0.9 * curve.system_entropy) want = m;
  EXPECT_EQ(darwinism::minimal_fragment_size(curve, 0.1), want);
  EXPECT_DOUBLE_EQ(darwinism::redundancy(g, 0.1), want ? 4.0 / want : 0.0);
}

TEST(PartialInfoCurve, SampledIsDeterministicAndBounded) {
  SubsystemLayout l{{"S", 2}};
  for (int k = 1; k <= 9; ++k) l = l.concat(SubsystemLayout::single("E" + std::to_string(k), 2));
  const auto g = random_pure(l, 3);
  const auto a = darwinism::partial_info_curve(g, 5, 42);
  const auto b = darwinism::partial_info_curve(g, 5, 42);
  EXPECT_EQ(darwinism::curve_csv(a), darwinism::curve_csv(b));
  EXPECT_EQ(a.points[4].samples, 5u);
  EXPECT_EQ(a.points[9].samples, 1u);
  for (const auto& p : a.points) {
    EXPECT_GE(p.min_bits, -1e-9);
    EXPECT_LE(p.max_bits, 2.0 * a.system_entropy + 1e-9);
    EXPECT_LE(p.min_bits, p.mean_bits + 1e-12);
    EXPECT_LE(p.mean_bits, p.max_bits + 1e-12);
  }
  EXPECT_EQ(darwinism::curve_csv(a).substr(0, 49), "fragment_size,mean_bits,min_bits,max_bits,samples");
}

TEST(Redundancy, InvalidDelta) {
  const auto g = branching(0.5, 0.0, 2);
  EXPECT_THROW(darwinism::redundancy(g, 0.0), InvalidArgument);
  EXPECT_THROW(darwinism::redundancy(g, 1.0), InvalidArgument);
}

TEST(Discord, ClassicalStatesVanish) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> p(4);
    double sum = 0.0;
    for (auto& x : p) sum += (x = uniform01(rng) + 0.01);
    Matrix m = Matrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) m(k, k) = p[k] / sum;
    EXPECT_LE(std::abs(darwinism::quantum_discord(two_qubit(m), "A")), 1e-6);
    // Local rotations of the classical bases leave it classical.
    const auto ua = random_unitary(SubsystemLayout::single("A", 2), rng);
    const auto us = random_unitary(SubsystemLayout::single("S", 2), rng);
    const auto rotated = conjugate(tensor(us, ua), two_qubit(m));
    EXPECT_LE(std::abs(darwinism::quantum_discord(rotated, "A")), 1e-6);
  }
}

TEST(Discord, BellState) {
  Vector b = Vector::Zero(4);
  b(0) = b(3) = 1.0 / std::sqrt(2.0);
  const auto rho = DensityOperator::from_pure(PureState(SubsystemLayout{{"S", 2}, {"A", 2}}, b));
  const auto r = darwinism::quantum_discord_full(rho, "A");
  EXPECT_NEAR(r.discord, 1.0, 1e-3);
  EXPECT_NEAR(r.mutual_information, 2.0, 1e-9);
  EXPECT_NEAR(darwinism::quantum_discord(rho, "S"), 1.0, 1e-3);
}

// Pure states: discord equals the entanglement entropy.
TEST(Discord, PureStatesAndLocalInvariance) {
  const SubsystemLayout l{{"S", 2}, {"A", 2}};
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto psi = random_pure(l, s);
    const auto rho = DensityOperator::from_pure(psi);
    const double d = darwinism::quantum_discord(rho, "A");
    EXPECT_NEAR(d, von_neumann_entropy(partial_trace(psi, {"S"})), 1e-6);
    const auto u = tensor(random_unitary(SubsystemLayout::single("S", 2), s + 10),
                          random_unitary(SubsystemLayout::single("A", 2), s + 20));
    EXPECT_NEAR(darwinism::quantum_discord(conjugate(u, rho), "A"), d, 1e-6);
  }
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_GE(darwinism::quantum_discord(random_density(l, 3, s), "A"), -1e-8);
}

TEST(Discord, PerfectRecordPostMeasurementState) {
  const auto g = branching(0.5, 0.0, 3);
  EXPECT_LE(std::abs(darwinism::quantum_discord(partial_trace(g, {"S", "E1"}), "E1")), 1e-6);
}

TEST(Discord, RequiresQubit) {
  const auto rho = random_density(SubsystemLayout{{"S", 2}, {"A", 3}}, 2, 1);
  EXPECT_THROW(darwinism::quantum_discord(rho, "A"), UnsupportedDimension);
}

TEST(SchmidtPointer, PerfectRecordsCoincide) {
  const auto g = branching(0.7, 0.0, 1);
  const auto gap = darwinism::schmidt_pointer_gap(g, PureState::basis(kS, 0), PureState::basis(kS, 1));
  EXPECT_LE(gap.angle, 1e-10);
  ASSERT_TRUE(gap.record_overlap);
  EXPECT_NEAR(*gap.record_overlap, 0.0, 1e-12);
}

TEST(SchmidtPointer, MatchesEigenOracle) {
  for (double c : {0.1, 0.5, 0.9}) {
    const auto g = branching(0.7, c, 2);
    const auto gap = darwinism::schmidt_pointer_gap(g, PureState::basis(kS, 0), PureState::basis(kS, 1));
    // Total record overlap across both fragments is c^2.
    const double cc = c * c;
    const double want = 0.5 * std::atan(2.0 * std::sqrt(0.21) * cc / 0.4);
    EXPECT_NEAR(gap.angle, want, 1e-10);
    EXPECT_NEAR(*gap.record_overlap, cc, 1e-12);
  }
}

TEST(SchmidtPointer, Errors) {
  EXPECT_THROW(darwinism::schmidt_pointer_gap(branching(0.5, 0.0, 1), PureState::basis(kS, 0), PureState::basis(kS, 1)),
               DegenerateSchmidt);
  EXPECT_THROW(darwinism::schmidt_pointer_gap(branching(0.7, 0.5, 1), PureState::basis(kS, 0), PureState::basis(kS, 0)),
               InvalidArgument);
}
