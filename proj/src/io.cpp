#include "pointerlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pointerlab/error.hpp"
#include "pointerlab/random.hpp"

namespace pointerlab::io {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("complex numbers must be [re, im] pairs");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Vector parse_vector(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("amplitude list must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Factor parse_factor(const json& j) {
  const auto& label = field(j, "label");
  const auto& dim = field(j, "dim");
  if (!label.is_string() || !dim.is_number_integer() || dim.get<long long>() <= 0)
    throw ConfigError("factor needs a string label and a positive integer dim");
  return {label.get<std::string>(), static_cast<std::size_t>(dim.get<long long>())};
}

SubsystemLayout parse_layout(const json& j) {
  std::vector<Factor> factors;
  if (j.is_object()) {
    factors.push_back(parse_factor(j));
  } else if (j.is_array() && !j.empty()) {
    for (const auto& f : j) factors.push_back(parse_factor(f));
  } else {
    throw ConfigError("layout must be a factor object or a nonempty list of factors");
  }
  return SubsystemLayout(std::move(factors));
}

json layout_json(const SubsystemLayout& layout) {
  json out = json::array();
  for (const auto& f : layout.factors()) out.push_back({{"label", f.label}, {"dim", f.dim}});
  return out;
}

PureState parse_state(const SubsystemLayout& layout, const json& j) {
  Vector v = parse_vector(j);
  if (static_cast<std::size_t>(v.size()) != layout.total_dim())
    throw ConfigError("state has " + std::to_string(v.size()) + " amplitudes, layout " + layout.describe() + " needs " +
                      std::to_string(layout.total_dim()));
  // Tolerate rounding in hand-written decimals.
  if (std::abs(v.norm() - 1.0) > 1e-6) throw ConfigError("state amplitudes are not normalized");
  return PureState::normalized(layout, std::move(v));
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

Matrix controlled_shift(std::size_t ds, std::size_t dl) {
  const auto d = static_cast<Eigen::Index>(ds * dl);
  Matrix u = Matrix::Zero(d, d);
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t l = 0; l < dl; ++l)
      u(static_cast<Eigen::Index>(s * dl + (l + s) % dl), static_cast<Eigen::Index>(s * dl + l)) = 1.0;
  return u;
}

}  // namespace

channel::TransferSpec parse_transfer_spec(std::string_view text) {
  const json doc = parse_document(text);
  try {
    auto sys = parse_layout(field(doc, "system"));
    auto app = parse_layout(field(doc, "apparatus"));
    auto ready = parse_state(app, field(doc, "ready"));
    std::vector<channel::Branch> branches;
    const auto& br = field(doc, "branches");
    if (!br.is_array()) throw ConfigError("branches must be an array");
    for (const auto& b : br)
      branches.push_back({parse_state(sys, field(b, "in")), parse_state(sys, field(b, "out")),
                          parse_state(app, field(b, "record"))});
    return channel::TransferSpec(std::move(sys), std::move(app), std::move(ready), std::move(branches));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("transfer spec: ") + e.what());
  }
}

std::string dump_transfer_spec(const channel::TransferSpec& spec) {
  json doc;
  doc["system"] = layout_json(spec.system_layout());
  doc["apparatus"] = layout_json(spec.apparatus_layout());
  doc["ready"] = vector_json(spec.ready().amplitudes());
  doc["branches"] = json::array();
  for (const auto& b : spec.branches())
    doc["branches"].push_back({{"in", vector_json(b.in_sys.amplitudes())},
                               {"out", vector_json(b.out_sys.amplitudes())},
                               {"record", vector_json(b.out_record.amplitudes())}});
  return doc.dump(2) + "\n";
}

chain::ChainConfig parse_chain_config(std::string_view text) {
  const json doc = parse_document(text);
  try {
    const auto sys = parse_layout(field(doc, "system"));
    if (sys.size() != 1) throw ConfigError("chain system must be a single factor");
    auto v = parse_state(sys, field(doc, "v"));
    auto w = parse_state(sys, field(doc, "w"));
    std::vector<chain::Link> links;
    const auto& lj = field(doc, "links");
    if (!lj.is_array()) throw ConfigError("links must be an array");
    SubsystemLayout seen = sys;
    for (const auto& l : lj) {
      const Factor f = parse_factor(l);
      std::string source = sys.factors().front().label;
      if (l.contains("source")) {
        if (!l["source"].is_string()) throw ConfigError("link source must be a label");
        source = l["source"].get<std::string>();
      }
      if (!seen.contains(source)) throw ConfigError("link '" + f.label + "' has unknown source '" + source + "'");
      const std::size_t ds = seen.dim_of(source);
      const SubsystemLayout ul{{source, ds}, {f.label, f.dim}};
      const auto& spec = field(l, "unitary");
      Matrix m;
      if (spec.is_string() && spec.get<std::string>() == "identity") {
        m = Matrix::Identity(static_cast<Eigen::Index>(ds * f.dim), static_cast<Eigen::Index>(ds * f.dim));
      } else if (spec.is_string() && spec.get<std::string>() == "controlled_shift") {
        m = controlled_shift(ds, f.dim);
      } else if (spec.is_object() && spec.contains("haar_seed")) {
        if (!spec["haar_seed"].is_number_unsigned()) throw ConfigError("haar_seed must be a nonnegative integer");
        m = random_unitary(ul, spec["haar_seed"].get<std::uint64_t>()).matrix();
      } else if (spec.is_array()) {
        m = parse_matrix(spec);
      } else {
        throw ConfigError("link '" + f.label + "': unrecognized unitary");
      }
      if (static_cast<std::size_t>(m.rows()) != ul.total_dim())
        throw ConfigError("link '" + f.label + "': unitary has wrong size");
      std::optional<PureState> ready;
      if (l.contains("ready")) ready = parse_state(SubsystemLayout::single(f.label, f.dim), l["ready"]);
      seen = seen.concat(SubsystemLayout::single(f.label, f.dim));
      links.push_back({f.label, f.dim, UnitaryOperator(ul, std::move(m)), std::move(ready), source});
    }
    return chain::ChainConfig(std::move(v), std::move(w), std::move(links));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("chain config: ") + e.what());
  }
}

std::string dump_chain_config(const chain::ChainConfig& config) {
  json doc;
  const auto& sf = config.v().layout().factors().front();
  doc["system"] = {{"label", sf.label}, {"dim", sf.dim}};
  doc["v"] = vector_json(config.v().amplitudes());
  doc["w"] = vector_json(config.w().amplitudes());
  doc["links"] = json::array();
  for (std::size_t i = 0; i < config.links().size(); ++i) {
    const auto& l = config.links()[i];
    json lj = {{"label", l.label}, {"dim", l.dim}, {"source", l.source}, {"unitary", matrix_json(l.unitary.matrix())}};
    if (l.ready) lj["ready"] = vector_json(l.ready->amplitudes());
    doc["links"].push_back(std::move(lj));
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace pointerlab::io
