#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointerlab/chain.hpp"
#include "pointerlab/channel.hpp"
#include "pointerlab/darwinism.hpp"
#include "pointerlab/error.hpp"
#include "pointerlab/io.hpp"
#include "pointerlab/linalg.hpp"
#include "pointerlab/optimizer.hpp"
#include "pointerlab/parallel.hpp"
#include "pointerlab/random.hpp"
#include "pointerlab/verifiers.hpp"

namespace pointerlab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Collects output files and writes them all at the end of a run.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}
  void add(std::string name, std::string contents) { files_.emplace_back(std::move(name), std::move(contents)); }
  json names() const {
    json out = json::array();
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }
  void write() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error("cannot create output directory '" + dir_ + "'");
    for (const auto& [name, contents] : files_) io::write_file((fs::path(dir_) / name).string(), contents);
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json manifest(const std::string& subcommand, std::uint64_t seed, json params) {
  json m;
  m["schema_version"] = kSummarySchemaVersion;
  m["tool"] = "pointerlab";
  m["tool_version"] = POINTERLAB_VERSION;
  m["subcommand"] = subcommand;
  m["seed"] = seed;
  m["parameters"] = std::move(params);
  return m;
}

// Summary is listed among the outputs it describes, then everything is written.
void finish(OutputSet& outputs, const std::string& summary_name, json& summary) {
  json names = outputs.names();
  names.push_back(summary_name);
  summary["outputs"] = names;
  outputs.add(summary_name, summary.dump(2) + "\n");
  outputs.write();
}

std::size_t pick(const std::vector<std::size_t>& options, Rng& rng) {
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

// Unit vector orthogonal to v (random direction within the complement).
PureState random_orthogonal(const PureState& v, Rng& rng) {
  const PureState r = random_pure(v.layout(), rng);
  Vector x = r.amplitudes() - inner(v, r) * v.amplitudes();
  x -= v.amplitudes().dot(x) * v.amplitudes();
  return PureState::normalized(v.layout(), x);
}

// Apparatus part (<s| (x) 1)|phi> of a branch whose system factor is s.
PureState record_of(const PureState& s, const PureState& phi, const SubsystemLayout& app) {
  const auto ds = static_cast<Eigen::Index>(s.dim());
  const Eigen::Index da = phi.amplitudes().size() / ds;
  Vector out = Vector::Zero(da);
  for (Eigen::Index i = 0; i < ds; ++i) out += std::conj(s.amplitudes()(i)) * phi.amplitudes().segment(i * da, da);
  return PureState::normalized(app, out);
}

// U = (W (x) 1) (sum_k |k><k| (x) V_k) (W^dag (x) 1): preserves every column of W.
UnitaryOperator controlled_unitary(const UnitaryOperator& basis, const SubsystemLayout& app, Rng& rng) {
  const auto ds = static_cast<Eigen::Index>(basis.dim());
  const auto da = static_cast<Eigen::Index>(app.total_dim());
  Matrix block = Matrix::Zero(ds * da, ds * da);
  for (Eigen::Index k = 0; k < ds; ++k) block.block(k * da, k * da, da, da) = random_unitary(app, rng).matrix();
  Matrix w = Matrix::Zero(ds * da, ds * da);
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index j = 0; j < ds; ++j)
      w.block(i * da, j * da, da, da) = basis.matrix()(i, j) * Matrix::Identity(da, da);
  return UnitaryOperator(basis.layout().concat(app), w * block * w.adjoint());
}

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double max_residual = 0.0;
  std::vector<std::string> lines;
};

struct Trial {
  bool pass = false;
  double residual = 0.0;
  std::string line;
};

SuiteResult run_suite(const std::string& name, std::size_t trials, const std::function<Trial(std::size_t)>& body) {
  std::vector<Trial> results(trials);
  parallel_for(trials, [&](std::size_t t) { results[t] = body(t); });
  SuiteResult s{name, trials, 0, 0.0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    s.passed += results[t].pass ? 1 : 0;
    s.max_residual = std::max(s.max_residual, results[t].residual);
    s.lines.push_back("suite=" + name + " trial=" + std::to_string(t) + " pass=" + (results[t].pass ? "1" : "0") + " " +
                      results[t].line);
  }
  return s;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

int cmd_verify(std::size_t trials, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& app_dims,
               std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  if (trials < 1) throw UsageError("--trials must be >= 1");
  if (dims.empty() || app_dims.empty()) throw UsageError("dimension lists must be nonempty");
  for (auto d : dims)
    if (d < 2) throw UsageError("--dims entries must be >= 2");
  for (auto d : app_dims)
    if (d < 2) throw UsageError("--app-dims entries must be >= 2");

  std::vector<SuiteResult> suites;

  // Random transfers with exact system preservation: identical records,
  // distinct records, or orthogonal outcomes.
  suites.push_back(run_suite("dichotomy", trials, [&](std::size_t t) {
    Rng rng(derive_seed(seed, 1, t));
    const auto sys = SubsystemLayout::single("S", pick(dims, rng));
    const auto app = SubsystemLayout::single("A", pick(app_dims, rng));
    const auto v = random_pure(sys, rng);
    const int kind = static_cast<int>(t % 3);
    const auto w = kind == 2 ? random_orthogonal(v, rng) : random_pure(sys, rng);
    const auto av = random_pure(app, rng);
    const auto aw = kind == 0 ? av : random_pure(app, rng);
    const channel::TransferSpec spec(sys, app, PureState::basis(app, 0), {{v, v, av}, {w, w, aw}});
    const auto report = channel::check_feasibility(spec);
    const auto verdict = verify::classify_dichotomy(v, w, av, aw);
    Trial tr;
    tr.line = verify::report_line(verdict) + " feasible=" + (report.feasible ? "1" : "0");
    if (kind == 0) {
      tr.pass = report.feasible && std::abs(inner(av, aw) - 1.0) <= 1e-10 && verdict.tag == verify::Dichotomy::NoRecord;
    } else if (kind == 1) {
      tr.pass = !report.feasible && verdict.tag == verify::Dichotomy::Violation;
    } else {
      const auto u = channel::complete_to_unitary(spec);
      tr.residual = channel::branch_mapping_error(u, spec);
      tr.pass = report.feasible && verdict.tag == verify::Dichotomy::OrthogonalOutcomes && tr.residual <= 1e-10;
    }
    return tr;
  }));

  // Norm residual of unitaries built from repeatable specs.
  suites.push_back(run_suite("norm_residual", trials, [&](std::size_t t) {
    Rng rng(derive_seed(seed, 2, t));
    const auto sys = SubsystemLayout::single("S", pick(dims, rng));
    const auto app = SubsystemLayout::single("A", pick(app_dims, rng));
    const auto v = random_pure(sys, rng);
    const bool orthogonal = t % 2 == 0;
    const auto w = orthogonal ? random_orthogonal(v, rng) : random_pure(sys, rng);
    const auto av = random_pure(app, rng);
    const auto aw = orthogonal ? random_pure(app, rng) : av;
    const auto ready = PureState::basis(app, 0);
    const channel::TransferSpec spec(sys, app, ready, {{v, v, av}, {w, w, aw}});
    const auto u = channel::complete_to_unitary(spec);
    const auto rv = record_of(v, apply(u, tensor(v, ready)), app);
    const auto rw = record_of(w, apply(u, tensor(w, ready)), app);
    const double a = std::sqrt(uniform01(rng));
    const cplx alpha = std::polar(a, 2.0 * M_PI * uniform01(rng));
    const cplx beta = std::polar(std::sqrt(1.0 - a * a), 2.0 * M_PI * uniform01(rng));
    Trial tr;
    tr.residual = verify::norm_residual(alpha, beta, v, w, rv, rw);
    tr.pass = tr.residual <= 1e-10;
    tr.line = "residual=" + fmt(tr.residual);
    return tr;
  }));

  // Mixed apparatus with a ghost partner.
  suites.push_back(run_suite("purified", trials, [&](std::size_t t) {
    Rng rng(derive_seed(seed, 3, t));
    const auto sys = SubsystemLayout::single("S", pick(dims, rng));
    const auto app = SubsystemLayout::single("A", pick(app_dims, rng));
    const std::size_t rank = 1 + std::uniform_int_distribution<std::size_t>(0, app.total_dim() - 1)(rng);
    const auto rho0 = random_density(app, rank, rng);
    const bool orthogonal = t % 2 == 0;
    Trial tr;
    if (orthogonal) {
      const auto basis = random_unitary(sys, rng);
      const auto u = controlled_unitary(basis, app, rng);
      const auto v = PureState::normalized(sys, basis.matrix().col(0));
      const auto w = PureState::normalized(sys, basis.matrix().col(1));
      tr.residual = verify::purified_residual(rho0, u, v, w).residual;
    } else {
      const auto u = tensor(UnitaryOperator::identity(sys), random_unitary(app, rng));
      tr.residual = verify::purified_residual(rho0, u, random_pure(sys, rng), random_pure(sys, rng)).residual;
    }
    tr.pass = tr.residual <= 1e-10;
    tr.line = "rank=" + std::to_string(rank) + " residual=" + fmt(tr.residual);
    return tr;
  }));

  suites.push_back(run_suite("mixed_invariant", trials, [&](std::size_t t) {
    Rng rng(derive_seed(seed, 4, t));
    const auto app = SubsystemLayout::single("A", pick(app_dims, rng));
    const std::size_t rank = 1 + std::uniform_int_distribution<std::size_t>(0, app.total_dim() - 1)(rng);
    const auto rho0 = random_density(app, rank, rng);
    const auto rv = conjugate(random_unitary(app, rng), rho0);
    const auto rw = conjugate(random_unitary(app, rng), rho0);
    const auto gap = verify::mixed_invariant_gap(rho0, rv, rw);
    Trial tr;
    tr.residual = std::abs(gap.lhs - gap.rhs);
    tr.pass = tr.residual <= 1e-10 && gap.rhs >= -1e-12;
    tr.line = "lhs=" + fmt(gap.lhs) + " rhs=" + fmt(gap.rhs);
    return tr;
  }));

  bool all = true;
  json sj = json::array();
  std::ostringstream report;
  for (const auto& s : suites) {
    all = all && s.passed == s.trials;
    sj.push_back({{"name", s.name}, {"trials", s.trials}, {"passed", s.passed}, {"max_residual", s.max_residual}});
    out << s.name << ": " << s.passed << "/" << s.trials << " passed\n";
    for (const auto& l : s.lines) report << l << '\n';
  }
  json summary = manifest("verify", seed, {{"trials", trials}, {"dims", dims}, {"app_dims", app_dims}});
  summary["suites"] = sj;
  summary["pass"] = all;
  OutputSet outputs(out_dir);
  outputs.add("verify_report.txt", report.str());
  finish(outputs, "verify_summary.json", summary);
  return all ? kExitOk : kExitViolation;
}

int cmd_chain(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  chain::ChainConfig config = io::parse_chain_config(io::read_file(config_path));
  const auto trace = chain::run_chain(config);
  OutputSet outputs(out_dir);
  outputs.add("chain_trace.csv", chain::trace_csv(trace));

  json summary = manifest("chain", 0, {{"config", fs::path(config_path).filename().string()}});
  summary["links"] = config.links().size();
  summary["factorizing"] = trace.final_stage().factorizes;
  double conservation = 0.0;
  for (const auto& s : trace.stages) conservation = std::max(conservation, std::abs(s.global_overlap - trace.initial_overlap));
  summary["max_global_overlap_drift"] = conservation;
  bool pass = conservation <= 1e-10;
  if (trace.final_stage().factorizes) {
    const auto [lhs, rhs] = chain::overlap_product_check(trace);
    const auto ledger = chain::quality_ledger(trace);
    outputs.add("chain_ledger.csv", chain::ledger_csv(trace, ledger));
    summary["product_error"] = std::abs(lhs - rhs);
    summary["budget"] = ledger.budget.str();
    summary["budget_consistent"] = ledger.consistent;
    summary["closure_error"] = ledger.closure_error;
    pass = pass && std::abs(lhs - rhs) <= chain::kProductTol && ledger.consistent;
    out << "overlap product error " << fmt(std::abs(lhs - rhs)) << ", ledger budget " << ledger.budget.str()
        << (ledger.consistent ? " (closed)\n" : " (NOT closed)\n");
  } else {
    out << "chain is NonFactorizing; overlap product and ledger not evaluated\n";
  }
  summary["pass"] = pass;
  finish(outputs, "chain_summary.json", summary);
  return pass ? kExitOk : kExitViolation;
}

int cmd_darwinism(std::size_t env_qubits, double record_overlap, double alpha2, double delta, std::size_t samples,
                  std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  if (env_qubits < 1 || env_qubits > 11) throw UsageError("--env-qubits must lie in [1, 11]");
  if (!(record_overlap >= 0.0 && record_overlap <= 1.0)) throw UsageError("--record-overlap must lie in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
  if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw UsageError("--alpha2 must lie in (0, 1)");
  if (samples < 1) throw UsageError("--samples must be >= 1");

  const auto qubit = [](const std::string& l) { return SubsystemLayout::single(l, 2); };
  std::vector<std::pair<PureState, PureState>> records;
  for (std::size_t k = 1; k <= env_qubits; ++k) {
    const auto layout = qubit("E" + std::to_string(k));
    Vector ew(2);
    ew << record_overlap, std::sqrt(std::max(0.0, 1.0 - record_overlap * record_overlap));
    records.emplace_back(PureState::basis(layout, 0), PureState::normalized(layout, ew));
  }
  const auto global = chain::build_branching_state(std::sqrt(alpha2), std::sqrt(1.0 - alpha2),
                                                   PureState::basis(qubit("S"), 0), PureState::basis(qubit("S"), 1),
                                                   records);
  const auto curve = darwinism::partial_info_curve(global, samples, seed);
  json summary = manifest("darwinism", seed,
                          {{"env_qubits", env_qubits}, {"record_overlap", record_overlap}, {"alpha2", alpha2},
                           {"delta", delta}, {"samples", samples}});
  summary["H_S_bits"] = curve.system_entropy;
  try {
    summary["redundancy"] = darwinism::redundancy(curve, delta);
    summary["m_delta"] = darwinism::minimal_fragment_size(curve, delta);
    summary["degenerate_system"] = false;
  } catch (const DegenerateSystem&) {
    summary["redundancy"] = 0.0;
    summary["m_delta"] = 0;
    summary["degenerate_system"] = true;
  }
  const auto pair = partial_trace(global, {"S", "E1"});
  const auto discord = darwinism::quantum_discord_full(pair, "E1");
  summary["discord"] = {{"pair", "S:E1"},
                        {"measured", "E1"},
                        {"discord_bits", discord.discord},
                        {"mutual_information_bits", discord.mutual_information},
                        {"classical_correlation_bits", discord.classical_correlation}};

  bool pass = true;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    if (p.min_bits < -darwinism::kEntropyTol || p.max_bits > 2.0 * curve.system_entropy + darwinism::kEntropyTol) pass = false;
  }
  summary["pass"] = pass;
  OutputSet outputs(out_dir);
  outputs.add("pip.csv", darwinism::curve_csv(curve));
  finish(outputs, "darwinism_summary.json", summary);
  out << "H(S) = " << io::format_real(curve.system_entropy) << " bits, R_delta = " << summary["redundancy"].dump()
      << ", discord(S:E1) = " << fmt(discord.discord) << " bits\n";
  return pass ? kExitOk : kExitViolation;
}

int cmd_frontier(const std::vector<double>& overlaps, const std::vector<double>& lambdas, std::size_t apparatus_dim,
                 const frontier::Budget& budget, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  if (overlaps.empty() || lambdas.empty()) throw UsageError("--overlaps and --lambdas must be nonempty");
  for (double c : overlaps)
    if (!(c >= 0.0 && c < 1.0)) throw UsageError("--overlaps entries must lie in [0, 1)");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw UsageError("--lambdas entries must be >= 0");
  if (apparatus_dim < 2 || apparatus_dim > 8) throw UsageError("--apparatus-dim must lie in [2, 8]");
  if (budget.max_iterations < 1 || budget.restarts < 1) throw UsageError("--iterations and --restarts must be >= 1");

  const auto rows = frontier::frontier_scan(overlaps, lambdas, seed, apparatus_dim, budget);
  const bool witness = frontier::dichotomy_witness(rows);
  json summary = manifest("frontier", seed,
                          {{"overlaps", overlaps},
                           {"lambdas", lambdas},
                           {"apparatus_dim", apparatus_dim},
                           {"iterations", budget.max_iterations},
                           {"restarts", budget.restarts}});
  summary["rows"] = rows.size();
  summary["dichotomy_witness"] = witness;
  summary["pass"] = witness;
  OutputSet outputs(out_dir);
  outputs.add("frontier.csv", frontier::frontier_csv(rows));
  finish(outputs, "frontier_summary.json", summary);
  out << rows.size() << " frontier rows, dichotomy witness " << (witness ? "holds" : "FAILS") << '\n';
  return witness ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pointerlab: information transfer, outcome orthogonality and redundant records"};
  app.require_subcommand(1);
  app.set_version_flag("--version", POINTERLAB_VERSION);

  std::uint64_t seed = 7;
  std::string out_dir = ".";

  auto* verify = app.add_subcommand("verify", "Run the dichotomy, norm-residual, purified and mixed-invariant ensembles");
  std::size_t trials = 1000;
  std::vector<std::size_t> dims{2, 3, 4};
  std::vector<std::size_t> app_dims{2, 3, 4, 5, 6};
  verify->add_option("--trials", trials, "Trials per suite")->capture_default_str();
  verify->add_option("--dims", dims, "System dimensions")->delimiter(',')->capture_default_str();
  verify->add_option("--app-dims", app_dims, "Apparatus dimensions")->delimiter(',')->capture_default_str();

  auto* chain_cmd = app.add_subcommand("chain", "Simulate a von Neumann chain from a JSON config");
  std::string config_path;
  chain_cmd->add_option("config", config_path, "Chain config (JSON)")->required();

  auto* darwin = app.add_subcommand("darwinism", "Partial-information plateau, redundancy and discord");
  std::size_t env_qubits = 8;
  double record_overlap = 0.0, alpha2 = 0.5, delta = 0.01;
  std::size_t samples = 64;
  darwin->add_option("--env-qubits", env_qubits, "Environment qubits")->capture_default_str();
  darwin->add_option("--record-overlap", record_overlap, "Per-qubit record overlap <e_v|e_w>")->capture_default_str();
  darwin->add_option("--alpha2", alpha2, "Branch weight |alpha|^2")->capture_default_str();
  darwin->add_option("--delta", delta, "Redundancy information deficit")->capture_default_str();
  darwin->add_option("--samples", samples, "Fragments sampled per size")->capture_default_str();

  auto* front = app.add_subcommand("frontier", "Information-disturbance frontier scan");
  std::vector<double> overlaps{0.0, 0.1, 0.5, 0.9};
  std::vector<double> lambdas{0.0, 1.0, 10.0, 1e4};
  std::size_t apparatus_dim = 4;
  frontier::Budget budget;
  front->add_option("--overlaps", overlaps, "System overlaps c in [0, 1)")->delimiter(',')->capture_default_str();
  front->add_option("--lambdas", lambdas, "Penalty weights")->delimiter(',')->capture_default_str();
  front->add_option("--apparatus-dim", apparatus_dim, "Apparatus dimension")->capture_default_str();
  front->add_option("--iterations", budget.max_iterations, "Ascent iterations per restart")->capture_default_str();
  front->add_option("--restarts", budget.restarts, "Random restarts")->capture_default_str();

  for (auto* sub : {verify, chain_cmd, darwin, front}) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    if (sub != chain_cmd) sub->add_option("--seed", seed, "Random seed")->capture_default_str();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << POINTERLAB_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(trials, dims, app_dims, seed, out_dir, out);
    if (chain_cmd->parsed()) return cmd_chain(config_path, out_dir, out);
    if (darwin->parsed())
      return cmd_darwinism(env_qubits, record_overlap, alpha2, delta, samples, seed, out_dir, out);
    if (front->parsed()) return cmd_frontier(overlaps, lambdas, apparatus_dim, budget, seed, out_dir, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LayoutError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pointerlab::cli
