#include "qfcs/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qfcs/error.hpp"
#include "qfcs/presets.hpp"

namespace qfcs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ConfigError(field, msg); }

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

Complex entry(const json& v, const std::string& field) {
  if (v.is_number()) return {number(v, field), 0.0};
  if (!v.is_array() || v.size() != 2) fail(field, "expected a [re, im] pair");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

Operator matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  Operator m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      fail(rf, "expected a row of " + std::to_string(n) + " entries (matrix must be square)");
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = entry(row[static_cast<std::size_t>(j)], rf + "[" + std::to_string(j) + "]");
  }
  return m;
}

void hermitian(const Operator& m, const std::string& field) {
  const double asym = hermiticity_defect(m);
  if (asym > 1e-12 * std::max(op_norm(m), 1.0)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "matrix is not Hermitian (asymmetry norm " << asym << ")";
    fail(field, msg.str());
  }
}

Operator hermitian_matrix(const json& v, const std::string& field) {
  Operator m = matrix(v, field);
  hermitian(m, field);
  return m;
}

Operator named_qubit_operator(const std::string& name, const std::string& field) {
  if (name == "sigma_x") return pauli_x();
  if (name == "sigma_y") return pauli_y();
  if (name == "sigma_z") return pauli_z();
  fail(field, "unknown operator name '" + name + "' (expected sigma_x, sigma_y or sigma_z)");
}

void expect_dim(const Operator& m, int dim, const std::string& field) {
  if (m.rows() != dim)
    fail(field, "dimension mismatch: expected " + std::to_string(dim) + ", got " + std::to_string(m.rows()));
}

Operator system_hamiltonian(const json& sys, int dim) {
  const json& h = require(sys, "hamiltonian", "system");
  const std::string field = "system.hamiltonian";
  Operator out;
  if (h.is_array()) {
    out = hermitian_matrix(h, field);
  } else if (h.is_object() && h.contains("diagonal")) {
    const json& d = h["diagonal"];
    if (!d.is_array() || d.empty()) fail(field + ".diagonal", "expected a nonempty array of numbers");
    out = Operator::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
          number(d[i], field + ".diagonal[" + std::to_string(i) + "]");
  } else {
    fail(field, "expected a matrix or {\"diagonal\": [...]}");
  }
  expect_dim(out, dim, field);
  return out;
}

DensityMatrix system_state(const json& sys, const Operator& h_system, double beta) {
  const std::string field = "system.initial_state";
  const json& s = require(sys, "initial_state", "system");
  const int dim = static_cast<int>(h_system.rows());
  if (s.is_array()) {
    const Operator rho = hermitian_matrix(s, field);
    expect_dim(rho, dim, field);
    try {
      return DensityMatrix(rho);
    } catch (const Error& e) {
      fail(field, e.what());
    }
  }
  if (!s.is_object()) fail(field, "expected a matrix or a preset object");
  const std::string preset = require(s, "preset", field).is_string() ? s["preset"].get<std::string>() : "";
  if (preset == "gibbs") return gibbs(h_system, number_or(s, "beta", beta, field));
  if (preset == "maximally_mixed") return DensityMatrix(identity(dim) / static_cast<double>(dim));
  if (preset == "basis") {
    const int k = integer(require(s, "index", field), field + ".index");
    if (k < 0 || k >= dim) fail(field + ".index", "out of range [0, " + std::to_string(dim) + ")");
    Operator rho = Operator::Zero(dim, dim);
    rho(k, k) = 1.0;
    return DensityMatrix(rho);
  }
  fail(field + ".preset", "unknown preset '" + preset + "' (expected gibbs, maximally_mixed or basis)");
}

struct ReservoirParts {
  Operator hamiltonian;
  std::optional<Operator> edge;
};

ReservoirParts reservoir(const json& res, std::optional<std::uint64_t> seed_override) {
  const std::string path = "reservoir";
  const json& p = require(res, "preset", path);
  if (!p.is_string()) fail(path + ".preset", "expected a string");
  const std::string preset = p.get<std::string>();
  if (preset == "chain") {
    const int n = integer(require(res, "n", path), path + ".n");
    std::uint64_t seed = 0;
    if (res.contains("seed")) {
      if (!res["seed"].is_number_unsigned() && !(res["seed"].is_number_integer() && res["seed"].get<long long>() >= 0))
        fail(path + ".seed", "expected a non-negative integer");
      seed = res["seed"].get<std::uint64_t>();
    }
    if (seed_override) seed = *seed_override;
    try {
      ChainReservoir c = build_chain_reservoir(n, number_or(res, "J", 0.0, path), number_or(res, "field", 1.0, path),
                                               seed, number_or(res, "disorder", 0.0, path));
      return {std::move(c.hamiltonian), std::move(c.edge)};
    } catch (const ResourceError& e) {
      fail(path + ".n", e.what());
    }
  }
  if (preset == "qubit") {
    const double field = number_or(res, "field", 1.0, path);
    return {field * pauli_z(), pauli_x()};
  }
  if (preset == "matrix") {
    ReservoirParts out{hermitian_matrix(require(res, "hamiltonian", path), path + ".hamiltonian"), std::nullopt};
    if (res.contains("coupling_operator")) {
      out.edge = hermitian_matrix(res["coupling_operator"], path + ".coupling_operator");
      expect_dim(*out.edge, static_cast<int>(out.hamiltonian.rows()), path + ".coupling_operator");
    }
    return out;
  }
  fail(path + ".preset", "unknown preset '" + preset + "' (expected chain, qubit or matrix)");
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("<document>", "expected a JSON object");

  std::vector<std::string> warnings;
  const double beta = number(require(doc, "beta", "<document>"), "beta");
  if (!(beta > 0.0)) fail("beta", "must be positive");

  const json& sys = require(doc, "system", "<document>");
  const int dim = integer(require(sys, "dim", "system"), "system.dim");
  if (dim < 1) fail("system.dim", "must be at least 1");
  const Operator h_system = system_hamiltonian(sys, dim);
  DensityMatrix rho_system = system_state(sys, h_system, beta);

  ReservoirParts res = reservoir(require(doc, "reservoir", "<document>"), seed_override);
  const int dr = static_cast<int>(res.hamiltonian.rows());
  const int d = dim * dr;

  const json& cpl = require(doc, "coupling", "<document>");
  if (!cpl.is_object()) fail("coupling", "expected an object");
  double lambda = 0.0;
  if (cpl.contains("lambda")) {
    lambda = number(cpl["lambda"], "coupling.lambda");
  } else {
    warnings.emplace_back("coupling.lambda not given; using 0 (uncoupled baseline)");
  }
  Operator v;
  if (cpl.contains("V")) {
    v = hermitian_matrix(cpl["V"], "coupling.V");
    expect_dim(v, d, "coupling.V");
  } else if (cpl.contains("system_operator")) {
    const json& a = cpl["system_operator"];
    const std::string field = "coupling.system_operator";
    Operator sys_op = a.is_string() ? named_qubit_operator(a.get<std::string>(), field) : hermitian_matrix(a, field);
    expect_dim(sys_op, dim, field);
    if (!res.edge) fail("reservoir.coupling_operator", "required when coupling.V is not given");
    v = tensor(sys_op, *res.edge);
  } else {
    fail("coupling", "expected either V or system_operator");
  }

  Tolerances tol;
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    tol.cluster_tol = number_or(t, "cluster_tol", tol.cluster_tol, "tolerances");
    tol.quad_tol = number_or(t, "quad_tol", tol.quad_tol, "tolerances");
    if (!(tol.cluster_tol > 0.0)) fail("tolerances.cluster_tol", "must be positive");
    if (!(tol.quad_tol > 0.0)) fail("tolerances.quad_tol", "must be positive");
  }

  try {
    return ParsedConfig{Scenario(h_system, res.hamiltonian, v, lambda, beta, std::move(rho_system), tol),
                        std::move(warnings)};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("<scenario>", e.what());
  }
}

ParsedConfig parse_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) fail("<file>", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), seed_override);
}

namespace {

json encode(const Operator& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string serialize_scenario(const Scenario& scn) {
  json doc;
  doc["beta"] = scn.beta();
  doc["system"] = {{"dim", scn.dim_system()},
                   {"hamiltonian", encode(scn.h_system())},
                   {"initial_state", encode(scn.rho_system().op())}};
  doc["reservoir"] = {{"preset", "matrix"}, {"hamiltonian", encode(scn.h_reservoir())}};
  doc["coupling"] = {{"lambda", scn.lambda()}, {"V", encode(scn.coupling())}};
  doc["tolerances"] = {{"cluster_tol", scn.tolerances().cluster_tol}, {"quad_tol", scn.tolerances().quad_tol}};
  return doc.dump(2) + "\n";
}

}  // namespace qfcs
