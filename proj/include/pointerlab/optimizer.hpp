#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pointerlab/states.hpp"

namespace pointerlab::frontier {

struct Budget {
  std::size_t max_iterations = 1500;
  std::size_t restarts = 5;
  double learning_rate = 0.05;
  /// Final learning rate as a fraction of the initial one (exponential decay).
  double final_rate_fraction = 1e-3;
  double fd_step = 1e-5;
  double grad_tol = 1e-6;
  /// Penalty continuation: lambda is raised by this factor per stage, from
  /// min(lambda, 1) up to the target. 0 or 1 disables it.
  double continuation_factor = 3.0;
};

struct FrontierProblem {
  PureState v;
  PureState w;
  std::size_t apparatus_dim = 2;
  std::optional<PureState> ready;  ///< default |0> on the apparatus
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Budget budget{};

  SubsystemLayout joint_layout() const;
  PureState ready_state() const;
};

struct FrontierPoint {
  double lambda = 0.0;
  double distinguishability = 0.0;  ///< trace distance of the apparatus branch states
  double disturbance = 0.0;         ///< 2 - <v|rho_S,v|v> - <w|rho_S,w|w>
  double objective = 0.0;           ///< distinguishability - lambda * disturbance
  std::size_t iterations = 0;
  bool converged = false;
};

struct OptimizeResult {
  UnitaryOperator unitary;
  FrontierPoint point;
};

/// Throws InvalidArgument for negative lambda or joint dimension above 16.
void validate(const FrontierProblem& problem);

FrontierPoint evaluate(const UnitaryOperator& u, const FrontierProblem& problem);

/// exp(i H) for Hermitian H, through its spectral decomposition.
Matrix exp_i_hermitian(const Matrix& h);
/// Hermitian d x d matrix from d^2 reals: diagonal first, then (re, im) of
/// the strict upper triangle in row order.
Matrix hermitian_from_params(const Eigen::VectorXd& params, std::size_t d);

/// Central finite-difference gradient of f at x with step h.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h);

/// Adam-style ascent over U = exp(iH) with finite-difference gradients and
/// random restarts; returns the best iterate. Deterministic under the seed.
OptimizeResult optimize(const FrontierProblem& problem);

/// Objective as a function of the generator parameters (for gradient checks).
std::function<double(const Eigen::VectorXd&)> objective_function(const FrontierProblem& problem);

struct FrontierRow {
  double overlap = 0.0;
  FrontierPoint point;
};

/// v = |0>, w = c|0> + sqrt(1 - c^2)|1> on a qubit; one optimization per
/// (c, lambda), overlap-major order. Throws InvalidArgument for c outside [0, 1).
std::vector<FrontierRow> frontier_scan(const std::vector<double>& overlaps, const std::vector<double>& lambdas,
                                       std::uint64_t seed, std::size_t apparatus_dim = 4,
                                       const Budget& budget = {});

/// For c >= 0.1 and lambda >= 1e4: distinguishability < 1e-2. For c = 0:
/// distinguishability > 0.99, and disturbance < 1e-3 once lambda >= 10.
bool dichotomy_witness(const std::vector<FrontierRow>& rows);

/// CSV header: overlap,lambda,distinguishability,disturbance,objective,iterations,converged
std::string frontier_csv(const std::vector<FrontierRow>& rows);

}  // namespace pointerlab::frontier
