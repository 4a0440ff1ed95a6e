#include "certnn/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace certnn {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail("\"" + where + "\" must be a number");
  return j.get<double>();
}

long as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail("\"" + where + "\" must be an integer");
  return j.get<long>();
}

std::uint64_t as_seed(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail("\"" + where + "\" must be an integer");
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail("\"" + where + "\" must be a string");
  return j.get<std::string>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail("\"" + where + "\" must be a nonempty array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_number(j[i], where);
  return v;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail("\"" + where + "\" must be a nonempty array of rows");
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    Eigen::VectorXd row = as_vector(j[r], where);
    if (r == 0) m.resize(j.size(), row.size());
    if (row.size() != m.cols()) fail("\"" + where + "\" rows differ in length");
    m.row(r) = row;
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vector_json(m.row(r)));
  return j;
}

Ellipsoid as_ellipsoid(const json& j, const char* mat_key, const char* vec_key,
                       const std::string& where) {
  Ellipsoid e;
  e.shape = as_matrix(require(j, mat_key), where + "." + mat_key);
  e.center = as_vector(require(j, vec_key), where + "." + vec_key);
  if (e.center.size() != e.shape.rows())
    fail("\"" + where + "\" shape and center disagree");
  return e;
}

Activation activation_field(const json& j, const std::string& where) {
  try {
    return activation_from_name(as_string(j, where));
  } catch (const std::invalid_argument& e) {
    fail("\"" + where + "\": " + e.what());
  }
}

}  // namespace

std::string network_to_json(const Network& net) {
  json j;
  j["activation"] = activation_name(net.activation);
  j["layers"] = json::array();
  for (const Layer& layer : net.layers)
    j["layers"].push_back({{"W", matrix_json(layer.W)}, {"b", vector_json(layer.b)}});
  if (net.skip) j["skip"] = matrix_json(*net.skip);
  return j.dump(2) + "\n";
}

Network network_from_json(const std::string& text) {
  const json j = parse(text);
  Network net;
  net.activation = activation_field(require(j, "activation"), "activation");
  const json& layers = require(j, "layers");
  if (!layers.is_array() || layers.empty())
    fail("\"layers\" must be a nonempty array");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string where = "layers[" + std::to_string(k) + "]";
    Layer layer;
    layer.W = as_matrix(require(layers[k], "W"), where + ".W");
    layer.b = as_vector(require(layers[k], "b"), where + ".b");
    net.layers.push_back(std::move(layer));
  }
  if (j.contains("skip")) net.skip = as_matrix(j["skip"], "skip");
  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("network: ") + e.what());
  }
  return net;
}

std::string problem_to_json(const ProblemSpec& spec) {
  json j;
  j["shape"] = {{"nx", spec.nx}, {"n1", spec.n1}, {"ny", spec.ny}};
  j["activation"] = activation_name(spec.activation);
  j["mode"] = recovery_mode_name(spec.mode);
  j["pairs"] = json::array();
  for (const PairSpec& pair : spec.pairs) {
    json in;
    in["A"] = matrix_json(pair.in.shape);
    in["b"] = vector_json(pair.in.center);
    json out;
    out["C"] = matrix_json(pair.out.shape);
    out["d"] = vector_json(pair.out.center);
    j["pairs"].push_back({{"input", in}, {"output", out}});
  }
  j["solver"] = {{"margin_target", spec.solver.margin_target},
                 {"radius", spec.solver.radius},
                 {"max_iters", spec.solver.max_iters},
                 {"time_budget_sec", spec.solver.time_budget_sec},
                 {"tol_eig", spec.solver.tol_eig},
                 {"seed", spec.solver.seed}};
  j["mc_samples"] = spec.mc_samples;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

ProblemSpec problem_from_json(const std::string& text) {
  const json j = parse(text);
  ProblemSpec spec;
  const json& shape = require(j, "shape");
  spec.nx = static_cast<int>(as_integer(require(shape, "nx"), "shape.nx"));
  spec.n1 = static_cast<int>(as_integer(require(shape, "n1"), "shape.n1"));
  spec.ny = static_cast<int>(as_integer(require(shape, "ny"), "shape.ny"));
  spec.activation = activation_field(require(j, "activation"), "activation");
  if (j.contains("mode")) {
    try {
      spec.mode = recovery_mode_from_name(as_string(j["mode"], "mode"));
    } catch (const std::invalid_argument& e) {
      fail(std::string("\"mode\": ") + e.what());
    }
  }
  const json& pairs = require(j, "pairs");
  if (!pairs.is_array() || pairs.empty())
    fail("\"pairs\" must be a nonempty array");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string where = "pairs[" + std::to_string(k) + "]";
    PairSpec pair;
    pair.in = as_ellipsoid(require(pairs[k], "input"), "A", "b", where + ".input");
    pair.out = as_ellipsoid(require(pairs[k], "output"), "C", "d", where + ".output");
    spec.pairs.push_back(std::move(pair));
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (s.contains("margin_target"))
      spec.solver.margin_target = as_number(s["margin_target"], "solver.margin_target");
    if (s.contains("radius")) spec.solver.radius = as_number(s["radius"], "solver.radius");
    if (s.contains("max_iters"))
      spec.solver.max_iters = as_integer(s["max_iters"], "solver.max_iters");
    if (s.contains("time_budget_sec"))
      spec.solver.time_budget_sec = as_number(s["time_budget_sec"], "solver.time_budget_sec");
    if (s.contains("tol_eig")) spec.solver.tol_eig = as_number(s["tol_eig"], "solver.tol_eig");
    if (s.contains("seed")) spec.solver.seed = as_seed(s["seed"], "solver.seed");
  }
  if (j.contains("mc_samples"))
    spec.mc_samples = as_integer(j["mc_samples"], "mc_samples");
  if (j.contains("seed")) spec.seed = as_seed(j["seed"], "seed");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("problem: ") + e.what());
  }
  return spec;
}

std::string report_to_json(const RunReport& report) {
  json j;
  j["verdict"] = verdict_name(report.verdict);
  j["margin"] = report.certificate.margin;
  j["margin_target"] = report.certificate.margin_target;
  j["iterations"] = report.certificate.iterations;
  j["pairs"] = json::array();
  for (const PairReport& pair : report.pairs)
    j["pairs"].push_back({{"violations", pair.violations},
                          {"schur_residual", pair.schur_residual},
                          {"verify_margin", pair.verify_margin},
                          {"verify_certified", pair.verify_certified}});
  j["mc_samples"] = report.mc_samples;
  j["membership_tolerance"] = 1e-12;
  j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open \"" + path + "\" for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) fail("error reading \"" + path + "\"");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open \"" + path + "\" for writing");
  out << text;
  if (!out.good()) fail("error writing \"" + path + "\"");
}

Network load_network(const std::string& path) {
  return network_from_json(read_text_file(path));
}

void save_network(const Network& net, const std::string& path) {
  write_text_file(path, network_to_json(net));
}

ProblemSpec load_problem(const std::string& path) {
  return problem_from_json(read_text_file(path));
}

void save_problem(const ProblemSpec& spec, const std::string& path) {
  write_text_file(path, problem_to_json(spec));
}

void save_report(const RunReport& report, const std::string& path) {
  write_text_file(path, report_to_json(report));
}

}  // namespace certnn
