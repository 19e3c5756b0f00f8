#include "pointerlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pointerlab/error.hpp"
#include "pointerlab/io.hpp"
#include "pointerlab/kernels.hpp"
#include "pointerlab/linalg.hpp"
#include "pointerlab/parallel.hpp"
#include "pointerlab/random.hpp"

namespace pointerlab::frontier {

SubsystemLayout FrontierProblem::joint_layout() const {
  return v.layout().concat(SubsystemLayout::single("A", apparatus_dim));
}

PureState FrontierProblem::ready_state() const {
  return ready ? *ready : PureState::basis("A", apparatus_dim, 0);
}

void validate(const FrontierProblem& p) {
  require_same_layout(p.v.layout(), p.w.layout(), "FrontierProblem");
  if (!(p.lambda >= 0.0)) throw InvalidArgument("FrontierProblem: lambda must be >= 0");
  if (p.apparatus_dim == 0) throw InvalidArgument("FrontierProblem: apparatus dimension must be positive");
  if (p.v.dim() * p.apparatus_dim > 16) throw InvalidArgument("FrontierProblem: joint dimension above 16");
  if (p.ready) require_same_layout(p.ready->layout(), SubsystemLayout::single("A", p.apparatus_dim), "FrontierProblem ready");
  if (p.budget.restarts == 0) throw InvalidArgument("FrontierProblem: at least one restart required");
}

namespace {

struct Prepared {
  Vector in_v, in_w;  // v (x) ready, w (x) ready
  Vector v, w;
  std::vector<std::size_t> dims;
  std::vector<bool> keep_sys, keep_app;
  double lambda;
};

Prepared prepare(const FrontierProblem& p) {
  validate(p);
  Prepared out;
  const auto ready = p.ready_state();
  out.in_v = tensor(p.v, ready).amplitudes();
  out.in_w = tensor(p.w, ready).amplitudes();
  out.v = p.v.amplitudes();
  out.w = p.w.amplitudes();
  out.dims = p.joint_layout().dims();
  out.keep_sys.assign(out.dims.size(), true);
  out.keep_sys.back() = false;
  out.keep_app.assign(out.dims.size(), false);
  out.keep_app.back() = true;
  out.lambda = p.lambda;
  return out;
}

FrontierPoint evaluate_matrix(const Matrix& u, const Prepared& p) {
  const Vector phi_v = u * p.in_v;
  const Vector phi_w = u * p.in_w;
  FrontierPoint pt;
  pt.lambda = p.lambda;
  const Matrix app_v = kernels::partial_trace_pure(phi_v, p.dims, p.keep_app);
  const Matrix app_w = kernels::partial_trace_pure(phi_w, p.dims, p.keep_app);
  pt.distinguishability = std::min(1.0, trace_distance(app_v, app_w));
  const Matrix sys_v = kernels::partial_trace_pure(phi_v, p.dims, p.keep_sys);
  const Matrix sys_w = kernels::partial_trace_pure(phi_w, p.dims, p.keep_sys);
  const double surv_v = p.v.dot(sys_v * p.v).real();
  const double surv_w = p.w.dot(sys_w * p.w).real();
  pt.disturbance = std::clamp(2.0 - surv_v - surv_w, 0.0, 2.0);
  pt.objective = pt.distinguishability - p.lambda * pt.disturbance;
  return pt;
}

}  // namespace

FrontierPoint evaluate(const UnitaryOperator& u, const FrontierProblem& problem) {
  const auto prepared = prepare(problem);
  require_same_layout(u.layout(), problem.joint_layout(), "frontier::evaluate");
  return evaluate_matrix(u.matrix(), prepared);
}

Matrix hermitian_from_params(const Eigen::VectorXd& params, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  if (params.size() != n * n) throw InvalidArgument("hermitian_from_params: need d^2 parameters");
  Matrix h = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = params(k++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const cplx z(params(k), params(k + 1));
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

Matrix exp_i_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                            double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

std::function<double(const Eigen::VectorXd&)> objective_function(const FrontierProblem& problem) {
  auto prepared = std::make_shared<Prepared>(prepare(problem));
  const std::size_t d = problem.joint_layout().total_dim();
  return [prepared, d](const Eigen::VectorXd& x) {
    return evaluate_matrix(exp_i_hermitian(hermitian_from_params(x, d)), *prepared).objective;
  };
}

namespace {

struct RunResult {
  Eigen::VectorXd params;
  FrontierPoint point;
};

std::vector<double> lambda_schedule(double target, double factor) {
  std::vector<double> out;
  if (factor > 1.0 && target > 1.0)
    for (double l = 1.0; l < target; l *= factor) out.push_back(l);
  out.push_back(target);
  return out;
}

RunResult ascend(const Prepared& prep, std::size_t d, const Budget& budget, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(d * d);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);

  const auto stages = lambda_schedule(prep.lambda, budget.continuation_factor);
  const std::size_t per_stage = std::max<std::size_t>(1, budget.max_iterations / stages.size());

  RunResult best{x, evaluate_matrix(exp_i_hermitian(hermitian_from_params(x, d)), prep)};
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-12;
  const double decay = std::pow(budget.final_rate_fraction, 1.0 / static_cast<double>(per_stage));
  std::size_t total = 0;
  bool converged = false;
  Prepared staged = prep;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    staged.lambda = stages[s];
    const bool last = s + 1 == stages.size();
    auto f = [&](const Eigen::VectorXd& p) {
      return evaluate_matrix(exp_i_hermitian(hermitian_from_params(p, d)), staged).objective;
    };
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n), v = Eigen::VectorXd::Zero(n);
    double rate = budget.learning_rate;
    const std::size_t iters = last ? budget.max_iterations - per_stage * (stages.size() - 1) : per_stage;
    for (std::size_t t = 0; t < iters; ++t, ++total) {
      const Eigen::VectorXd g = fd_gradient(f, x, budget.fd_step);
      if (g.cwiseAbs().maxCoeff() < budget.grad_tol) {
        converged = last;
        break;
      }
      m = beta1 * m + (1.0 - beta1) * g;
      v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t + 1));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t + 1));
      x += rate * ((m / c1).array() / ((v / c2).array().sqrt() + eps)).matrix();
      rate *= decay;
      // Best iterate is judged at the target lambda, whatever the stage.
      const auto pt = evaluate_matrix(exp_i_hermitian(hermitian_from_params(x, d)), prep);
      if (pt.objective > best.point.objective) best = {x, pt};
    }
  }
  best.point.iterations = total;
  best.point.converged = converged;
  return best;
}

}  // namespace

OptimizeResult optimize(const FrontierProblem& problem) {
  const auto prep = prepare(problem);
  const auto layout = problem.joint_layout();
  const std::size_t d = layout.total_dim();
  std::vector<RunResult> runs(problem.budget.restarts);
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = ascend(prep, d, problem.budget, derive_seed(problem.seed, 0x0B7, r));
  });
  std::size_t pick = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].point.objective > runs[pick].point.objective) pick = r;
  Matrix u = exp_i_hermitian(hermitian_from_params(runs[pick].params, d));
  return {UnitaryOperator(layout, std::move(u)), runs[pick].point};
}

std::vector<FrontierRow> frontier_scan(const std::vector<double>& overlaps, const std::vector<double>& lambdas,
                                       std::uint64_t seed, std::size_t apparatus_dim, const Budget& budget) {
  for (double c : overlaps)
    if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("frontier_scan: overlaps must lie in [0, 1)");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw InvalidArgument("frontier_scan: lambdas must be >= 0");
  std::vector<FrontierRow> rows(overlaps.size() * lambdas.size());
  const auto sys = SubsystemLayout::single("S", 2);
  // Rows run in parallel; each optimize() then runs its restarts serially
  // inside the nested region.
  parallel_for(rows.size(), [&](std::size_t idx) {
    const double c = overlaps[idx / lambdas.size()];
    const double lambda = lambdas[idx % lambdas.size()];
    Vector w(2);
    w << c, std::sqrt(1.0 - c * c);
    FrontierProblem problem{PureState::basis(sys, 0), PureState::normalized(sys, w), apparatus_dim, std::nullopt,
                            lambda, derive_seed(seed, 0xF5, idx), budget};
    rows[idx] = {c, optimize(problem).point};
  });
  return rows;
}

bool dichotomy_witness(const std::vector<FrontierRow>& rows) {
  for (const auto& r : rows) {
    if (r.overlap >= 0.1 && r.point.lambda >= 1e4 && !(r.point.distinguishability < 1e-2)) return false;
    if (r.overlap == 0.0) {
      if (!(r.point.distinguishability > 0.99)) return false;
      if (r.point.lambda >= 10.0 && !(r.point.disturbance < 1e-3)) return false;
    }
  }
  return true;
}

std::string frontier_csv(const std::vector<FrontierRow>& rows) {
  std::ostringstream os;
  os << "overlap,lambda,distinguishability,disturbance,objective,iterations,converged\n";
  for (const auto& r : rows)
    os << io::format_real(r.overlap) << ',' << io::format_real(r.point.lambda) << ','
       << io::format_real(r.point.distinguishability) << ',' << io::format_real(r.point.disturbance) << ','
       << io::format_real(r.point.objective) << ',' << r.point.iterations << ',' << (r.point.converged ? 1 : 0)
       << '\n';
  return os.str();
}

}  // namespace pointerlab::frontier
