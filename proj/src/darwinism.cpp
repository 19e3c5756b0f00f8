#include "pointerlab/darwinism.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pointerlab/error.hpp"
#include "pointerlab/io.hpp"
#include "pointerlab/kernels.hpp"
#include "pointerlab/parallel.hpp"
#include "pointerlab/random.hpp"

namespace pointerlab::darwinism {

double subset_entropy(const PureState& global, const LabelSet& labels) {
  if (labels.empty()) return 0.0;
  const auto inside = global.layout().subset(labels);
  const auto outside = global.layout().complement(labels);
  if (outside.empty()) return 0.0;
  const LabelSet smaller = inside.total_dim() <= outside.total_dim() ? inside.labels() : outside.labels();
  return von_neumann_entropy(partial_trace(global, smaller));
}

double mutual_information(const PureState& global, const FragmentSpec& fragment, const std::string& system) {
  if (!global.layout().contains(system)) throw LayoutError("mutual_information: no system factor '" + system + "'");
  if (fragment.labels.empty()) return 0.0;
  for (const auto& l : fragment.labels) {
    if (l == system) throw LayoutError("mutual_information: fragment contains the system");
    (void)global.layout().index_of(l);
  }
  LabelSet joint = fragment.labels;
  joint.push_back(system);
  return subset_entropy(global, {system}) + subset_entropy(global, fragment.labels) - subset_entropy(global, joint);
}

namespace {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

void enumerate_subsets(std::size_t n, std::size_t m, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    out.push_back(idx);
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<std::vector<std::size_t>> choose_fragments(std::size_t n, std::size_t m, std::size_t cap,
                                                       std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> out;
  if (binomial(n, m) <= cap) {
    enumerate_subsets(n, m, out);
    return out;
  }
  Rng rng(derive_seed(seed, 0xDA, m));
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> pool(n);
  while (out.size() < cap) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> frag(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(frag.begin(), frag.end());
    if (seen.insert(frag).second) out.push_back(std::move(frag));
  }
  return out;
}

}  // namespace

PartialInfoCurve partial_info_curve(const PureState& global, std::size_t samples_per_size, std::uint64_t seed,
                                    const std::string& system) {
  if (samples_per_size == 0) throw InvalidArgument("partial_info_curve: samples_per_size must be >= 1");
  LabelSet env;
  for (const auto& l : global.layout().labels())
    if (l != system) env.push_back(l);
  if (env.size() == global.layout().size()) throw LayoutError("partial_info_curve: no system factor '" + system + "'");
  if (env.empty()) throw InvalidArgument("partial_info_curve: no environment factors");

  PartialInfoCurve curve;
  curve.environment_size = env.size();
  curve.system_entropy = subset_entropy(global, {system});
  for (std::size_t m = 0; m <= env.size(); ++m) {
    const auto fragments = choose_fragments(env.size(), m, samples_per_size, seed);
    std::vector<double> values(fragments.size());
    parallel_for(fragments.size(), [&](std::size_t i) {
      FragmentSpec f;
      for (auto k : fragments[i]) f.labels.push_back(env[k]);
      values[i] = mutual_information(global, f, system);
    });
    CurvePoint p;
    p.fragment_size = m;
    p.samples = values.size();
    p.min_bits = *std::min_element(values.begin(), values.end());
    p.max_bits = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    p.mean_bits = sum / static_cast<double>(values.size());
    curve.points.push_back(p);
  }
  return curve;
}

std::size_t minimal_fragment_size(const PartialInfoCurve& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("redundancy: delta must lie in (0, 1)");
  if (curve.system_entropy <= kEntropyTol) throw DegenerateSystem("redundancy: system entropy vanishes");
  const double target = (1.0 - delta) * curve.system_entropy;
  for (const auto& p : curve.points)
    if (p.fragment_size >= 1 && p.mean_bits >= target) return p.fragment_size;
  return 0;
}

double redundancy(const PartialInfoCurve& curve, double delta) {
  const std::size_t m = minimal_fragment_size(curve, delta);
  return m == 0 ? 0.0 : static_cast<double>(curve.environment_size) / static_cast<double>(m);
}

double redundancy(const PureState& global, double delta, std::size_t samples_per_size, std::uint64_t seed,
                  const std::string& system) {
  if (subset_entropy(global, {system}) <= kEntropyTol) throw DegenerateSystem("redundancy: system entropy vanishes");
  return redundancy(partial_info_curve(global, samples_per_size, seed, system), delta);
}

namespace {

// Blocks M_ab = <a|_A rho |b>_A on the unmeasured factors.
struct MeasuredBlocks {
  Matrix m[2][2];
};

MeasuredBlocks measured_blocks(const DensityOperator& rho, std::size_t measured_pos) {
  const auto dims = rho.layout().dims();
  const std::size_t sel[] = {measured_pos};
  const auto split = kernels::split_indices(dims, sel);
  const auto dr = static_cast<Eigen::Index>(split.rest.size());
  MeasuredBlocks b;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      b.m[a][c].resize(dr, dr);
      for (Eigen::Index i = 0; i < dr; ++i)
        for (Eigen::Index j = 0; j < dr; ++j)
          b.m[a][c](i, j) = rho.matrix()(static_cast<Eigen::Index>(split.selected[a] + split.rest[i]),
                                         static_cast<Eigen::Index>(split.selected[c] + split.rest[j]));
    }
  return b;
}

// Average entropy of the unmeasured side after measuring along (theta, phi).
double conditional_entropy(const MeasuredBlocks& b, double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const cplx e = std::polar(1.0, phi);
  double total = 0.0;
  for (int sign : {+1, -1}) {
    // Pi = (I + sign n.sigma) / 2
    cplx pi[2][2];
    pi[0][0] = 0.5 * (1.0 + sign * ct);
    pi[1][1] = 0.5 * (1.0 - sign * ct);
    pi[0][1] = 0.5 * sign * st * std::conj(e);
    pi[1][0] = 0.5 * sign * st * e;
    Matrix cond = Matrix::Zero(b.m[0][0].rows(), b.m[0][0].cols());
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) cond += pi[c][a] * b.m[a][c];
    const double p = cond.trace().real();
    if (p <= 1e-15) continue;
    cond /= p;
    total += p * entropy_bits(0.5 * (cond + cond.adjoint()));
  }
  return total;
}

template <class F>
double golden_section_min(F&& f, double lo, double hi, double& arg) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 <= f2) {
    arg = x1;
    return f1;
  }
  arg = x2;
  return f2;
}

}  // namespace

DiscordResult quantum_discord_full(const DensityOperator& rho, const std::string& measured) {
  const auto pos = rho.layout().index_of(measured);
  if (rho.layout().factors()[pos].dim != 2)
    throw UnsupportedDimension("quantum_discord: measured subsystem must be a qubit");
  if (rho.layout().size() < 2) throw LayoutError("quantum_discord: need an unmeasured subsystem");
  const LabelSet a_labels{measured};
  const LabelSet s_labels = rho.layout().complement(a_labels).labels();
  const double hs = von_neumann_entropy(partial_trace(rho, s_labels));
  const double ha = von_neumann_entropy(partial_trace(rho, a_labels));
  const double hsa = von_neumann_entropy(rho);

  const auto blocks = measured_blocks(rho, pos);
  constexpr int kGrid = 64;
  const double pi = std::numbers::pi;
  const double dtheta = pi / (kGrid - 1), dphi = 2.0 * pi / kGrid;
  double best = std::numeric_limits<double>::infinity(), bt = 0.0, bp = 0.0;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      const double t = i * dtheta, p = j * dphi;
      const double v = conditional_entropy(blocks, t, p);
      if (v < best) {
        best = v;
        bt = t;
        bp = p;
      }
    }
  for (int round = 0; round < 3; ++round) {
    double arg = bt;
    double v = golden_section_min([&](double t) { return conditional_entropy(blocks, t, bp); }, bt - dtheta,
                                  bt + dtheta, arg);
    if (v < best) {
      best = v;
      bt = arg;
    }
    arg = bp;
    v = golden_section_min([&](double p) { return conditional_entropy(blocks, bt, p); }, bp - dphi, bp + dphi, arg);
    if (v < best) {
      best = v;
      bp = arg;
    }
  }
  DiscordResult r;
  r.mutual_information = hs + ha - hsa;
  r.classical_correlation = hs - best;
  r.discord = r.mutual_information - r.classical_correlation;
  r.theta = bt;
  r.phi = bp;
  return r;
}

double quantum_discord(const DensityOperator& rho, const std::string& measured) {
  return quantum_discord_full(rho, measured).discord;
}

SchmidtPointerGap schmidt_pointer_gap(const PureState& global, const PureState& pointer0, const PureState& pointer1,
                                      const std::string& system) {
  const auto pos = global.layout().index_of(system);
  if (global.layout().factors()[pos].dim != 2) throw UnsupportedDimension("schmidt_pointer_gap: system must be a qubit");
  require_same_layout(pointer0.layout(), pointer1.layout(), "schmidt_pointer_gap pointers");
  require_same_layout(pointer0.layout(), SubsystemLayout::single(system, 2), "schmidt_pointer_gap pointers");
  if (std::abs(inner(pointer0, pointer1)) > 1e-10) throw InvalidArgument("schmidt_pointer_gap: pointer states not orthogonal");

  const auto rho_s = partial_trace(global, {system});
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_s.matrix());
  if (es.eigenvalues()(1) - es.eigenvalues()(0) <= 1e-9)
    throw DegenerateSchmidt("schmidt_pointer_gap: reduced system state is degenerate");
  const Vector s0 = es.eigenvectors().col(1);
  const double a = std::abs(pointer0.amplitudes().dot(s0));
  const double b = std::abs(pointer1.amplitudes().dot(s0));
  SchmidtPointerGap gap;
  gap.angle = std::atan2(std::min(a, b), std::max(a, b));

  // Relative record states (<p_k| (x) 1)|global>, with the system moved first.
  const std::size_t sel[] = {pos};
  const auto split = kernels::split_indices(global.layout().dims(), sel);
  Vector rec[2];
  const PureState* pointers[2] = {&pointer0, &pointer1};
  for (int k = 0; k < 2; ++k) {
    rec[k] = Vector::Zero(static_cast<Eigen::Index>(split.rest.size()));
    for (std::size_t r = 0; r < split.rest.size(); ++r)
      for (Eigen::Index s = 0; s < 2; ++s)
        rec[k](static_cast<Eigen::Index>(r)) +=
            std::conj(pointers[k]->amplitudes()(s)) * global.amplitudes()(static_cast<Eigen::Index>(split.selected[s] + split.rest[r]));
  }
  const double n0 = rec[0].norm(), n1 = rec[1].norm();
  if (n0 > 1e-12 && n1 > 1e-12) gap.record_overlap = std::abs(rec[0].dot(rec[1])) / (n0 * n1);
  return gap;
}

std::string curve_csv(const PartialInfoCurve& curve) {
  std::ostringstream os;
  os << "fragment_size,mean_bits,min_bits,max_bits,samples\n";
  for (const auto& p : curve.points)
    os << p.fragment_size << ',' << io::format_real(p.mean_bits) << ',' << io::format_real(p.min_bits) << ','
       << io::format_real(p.max_bits) << ',' << p.samples << '\n';
  return os.str();
}

}  // namespace pointerlab::darwinism
