#include "pauliforge/io.hpp"

#include <fstream>
#include <sstream>

namespace pauliforge {

using nlohmann::json;

namespace {

json complex_vector_to_json(const VectorXcd& v) {
  json re = json::array(), im = json::array();
  for (std::int64_t i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

VectorXcd complex_vector_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
    throw std::invalid_argument("expected matching re/im arrays");
  }
  VectorXcd v(re.size());
  for (size_t i = 0; i < re.size(); ++i) {
    v(i) = cxd(re[i].get<double>(), im[i].get<double>());
  }
  return v;
}

}  // namespace

json to_json(const PauliProbVector& k) {
  return json{{"n_qubits", k.n_qubits()},
              {"k", std::vector<double>(k.values().begin(), k.values().end())}};
}

PauliProbVector prob_vector_from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("k");
  if (!arr.is_array()) throw std::invalid_argument("expected a probability array");
  VectorXd k(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) k(i) = arr[i].get<double>();
  PauliProbVector out{std::move(k)};
  if (!j.is_array() && j.contains("n_qubits") &&
      j.at("n_qubits").get<int>() != out.n_qubits()) {
    throw std::invalid_argument("n_qubits does not match k length");
  }
  return out;
}

json to_json(const DensityMatrix& rho) {
  json re = json::array(), im = json::array();
  for (std::int64_t i = 0; i < rho.dim(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (std::int64_t j = 0; j < rho.dim(); ++j) {
      rrow.push_back(rho.matrix()(i, j).real());
      irow.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_matrix_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  size_t n = re.size();
  if (im.size() != n) throw std::invalid_argument("re/im size mismatch");
  MatrixXcd m(n, n);
  for (size_t r = 0; r < n; ++r) {
    if (re[r].size() != n || im[r].size() != n) {
      throw std::invalid_argument("density matrix rows must be square");
    }
    for (size_t c = 0; c < n; ++c) {
      m(r, c) = cxd(re[r][c].get<double>(), im[r][c].get<double>());
    }
  }
  return DensityMatrix(std::move(m));
}

json to_json(const Gate& g) {
  json out{{"kind", gate_kind_name(g.kind)},
           {"targets", json::array({g.target})}};
  if (is_rotation(g.kind)) out["angle"] = g.angle;
  json controls = json::array();
  for (const Control& c : g.controls) {
    controls.push_back(json::array({c.qubit, c.value}));
  }
  out["controls"] = std::move(controls);
  return out;
}

Gate gate_from_json(const json& j) {
  Gate g;
  g.kind = gate_kind_from_name(j.at("kind").get<std::string>());
  const auto& targets = j.at("targets");
  if (!targets.is_array() || targets.size() != 1) {
    throw std::invalid_argument("gate targets must be a single-element array");
  }
  g.target = targets[0].get<int>();
  if (is_rotation(g.kind)) g.angle = j.at("angle").get<double>();
  if (j.contains("controls")) {
    for (const auto& c : j.at("controls")) {
      g.controls.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    }
  }
  return g;
}

json to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates) gates.push_back(to_json(g));
  return json{{"n_qubits", c.n_qubits},
              {"ancilla_range",
               json::array({c.ancilla_range.first, c.ancilla_range.second})},
              {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  c.n_qubits = j.at("n_qubits").get<int>();
  const auto& ar = j.at("ancilla_range");
  c.ancilla_range = {ar.at(0).get<int>(), ar.at(1).get<int>()};
  for (const auto& g : j.at("gates")) c.add(gate_from_json(g));
  return c;
}

json to_json(const StateCurve& curve) {
  json samples = json::array();
  for (size_t i = 0; i < curve.p.size(); ++i) {
    json s = complex_vector_to_json(curve.beta[i]);
    s["p"] = curve.p[i];
    samples.push_back(std::move(s));
  }
  return json{{"dim", curve.dim()}, {"samples", std::move(samples)}};
}

StateCurve state_curve_from_json(const json& j) {
  StateCurve curve;
  std::int64_t dim = j.at("dim").get<std::int64_t>();
  for (const auto& s : j.at("samples")) {
    curve.p.push_back(s.at("p").get<double>());
    VectorXcd beta = complex_vector_from_json(s);
    if (beta.size() != dim) {
      throw std::invalid_argument("state curve sample has wrong dimension");
    }
    curve.beta.push_back(std::move(beta));
  }
  curve.validate();
  return curve;
}

json to_json(const OneprDecomposition& d) {
  json samples = json::array();
  for (const auto& [p, s] : d.s_of_p) samples.push_back(json::array({p, s}));
  return json{{"dim", d.a.size()},
              {"a", complex_vector_to_json(d.a)},
              {"b", complex_vector_to_json(d.b)},
              {"c", complex_vector_to_json(d.c)},
              {"s_samples", std::move(samples)}};
}

OneprDecomposition decomposition_from_json(const json& j) {
  OneprDecomposition d;
  d.a = complex_vector_from_json(j.at("a"));
  d.b = complex_vector_from_json(j.at("b"));
  d.c = complex_vector_from_json(j.at("c"));
  for (const auto& s : j.at("s_samples")) {
    d.s_of_p.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
  }
  d.validate();
  return d;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pauliforge
