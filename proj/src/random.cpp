#include "pointerlab/random.hpp"

#include <cmath>

#include <Eigen/QR>

#include "pointerlab/error.hpp"

namespace pointerlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) + index);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return g;
}

PureState random_pure(const SubsystemLayout& layout, Rng& rng) {
  if (layout.total_dim() == 0) throw InvalidArgument("random_pure: empty layout");
  Matrix g = ginibre(rng, layout.total_dim(), 1);
  return PureState::normalized(layout, g.col(0));
}

PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(layout, rng);
}

UnitaryOperator random_unitary(const SubsystemLayout& layout, Rng& rng) {
  const std::size_t d = layout.total_dim();
  const Matrix g = ginibre(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return UnitaryOperator(layout, std::move(q));
}

UnitaryOperator random_unitary(const SubsystemLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(layout, rng);
}

DensityOperator random_density(const SubsystemLayout& layout, std::size_t rank, Rng& rng) {
  const std::size_t d = layout.total_dim();
  if (rank == 0 || rank > d) throw InvalidArgument("random_density: rank out of range");
  const Matrix g = ginibre(rng, d, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(layout, std::move(rho));
}

DensityOperator random_density(const SubsystemLayout& layout, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(layout, rank, rng);
}

}  // namespace pointerlab
