#include "pauliforge/qasm.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace pauliforge {

namespace {

bool qasm_ready(const Gate& g) {
  if (g.controls.empty()) return true;
  if (g.controls.size() > 1) return false;
  if (g.controls[0].value != 1) return false;
  return g.kind == GateKind::X || g.kind == GateKind::Y || g.kind == GateKind::Z;
}

void emit(std::vector<Gate>& out, Gate g) { out.push_back(std::move(g)); }

// Controlled rotation recursion: peeling one control halves the angle,
// C(R(a); S) = R(a/2; S') CX R(-a/2; S') CX, valid for RZ and RY.
void decompose_controlled_rotation(std::vector<Gate>& out, GateKind kind,
                                   double angle, int target,
                                   std::vector<Control> controls);

// Multi-controlled phase diag(1,...,1,e^{ia}) on the all-ones subspace of
// `qubits`. Exact except for the final single-qubit step, which maps to
// RZ(a) and drops the global phase e^{ia/2}.
void decompose_phase(std::vector<Gate>& out, double angle,
                     std::vector<int> qubits) {
  int t = qubits.back();
  qubits.pop_back();
  if (qubits.empty()) {
    emit(out, Gate::rz(t, angle));
    return;
  }
  std::vector<Control> controls;
  for (int q : qubits) controls.push_back({q, 1});
  decompose_controlled_rotation(out, GateKind::RZ, angle, t, controls);
  decompose_phase(out, angle / 2.0, std::move(qubits));
}

void decompose_controlled_rotation(std::vector<Gate>& out, GateKind kind,
                                   double angle, int target,
                                   std::vector<Control> controls) {
  if (controls.empty()) {
    emit(out, {kind, angle, target, {}});
    return;
  }
  if (kind == GateKind::RX) {
    emit(out, Gate::h(target));
    decompose_controlled_rotation(out, GateKind::RZ, angle, target, controls);
    emit(out, Gate::h(target));
    return;
  }
  Control last = controls.back();
  controls.pop_back();
  if (last.value == 0) {
    emit(out, Gate::x(last.qubit));
    controls.push_back({last.qubit, 1});
    decompose_controlled_rotation(out, kind, angle, target, std::move(controls));
    emit(out, Gate::x(last.qubit));
    return;
  }
  decompose_controlled_rotation(out, kind, angle / 2.0, target, controls);
  emit(out, Gate::cx(last.qubit, target));
  decompose_controlled_rotation(out, kind, -angle / 2.0, target, controls);
  emit(out, Gate::cx(last.qubit, target));
}

void decompose_gate(std::vector<Gate>& out, const Gate& g) {
  if (qasm_ready(g)) {
    emit(out, g);
    return;
  }
  // Strip value-0 controls first.
  for (size_t i = 0; i < g.controls.size(); ++i) {
    if (g.controls[i].value == 0) {
      Gate inner = g;
      inner.controls[i].value = 1;
      emit(out, Gate::x(g.controls[i].qubit));
      decompose_gate(out, inner);
      emit(out, Gate::x(g.controls[i].qubit));
      return;
    }
  }
  if (is_rotation(g.kind)) {
    decompose_controlled_rotation(out, g.kind, g.angle, g.target, g.controls);
    return;
  }
  if (g.kind == GateKind::H) {
    throw std::invalid_argument("decompose_for_qasm: controlled H unsupported");
  }
  // Multi-controlled Pauli. Reduce X and Y to Z by basis change, then treat
  // C^k Z as a phase of pi on the all-ones subspace of controls + target.
  const double pi = std::numbers::pi;
  if (g.kind == GateKind::X) {
    emit(out, Gate::h(g.target));
    Gate z = g;
    z.kind = GateKind::Z;
    decompose_gate(out, z);
    emit(out, Gate::h(g.target));
    return;
  }
  if (g.kind == GateKind::Y) {
    emit(out, Gate::rz(g.target, -pi / 2.0));
    Gate x = g;
    x.kind = GateKind::X;
    decompose_gate(out, x);
    emit(out, Gate::rz(g.target, pi / 2.0));
    return;
  }
  std::vector<int> qubits;
  for (const Control& c : g.controls) qubits.push_back(c.qubit);
  qubits.push_back(g.target);
  decompose_phase(out, pi, std::move(qubits));
}

std::string format_angle(double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace

Circuit decompose_for_qasm(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.ancilla_range = c.ancilla_range;
  std::vector<Gate> gates;
  for (const Gate& g : c.gates) decompose_gate(gates, g);
  for (Gate& g : gates) out.add(std::move(g));
  return out;
}

std::string export_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "qreg q[" << c.n_qubits << "];\n";
  for (const Gate& g : c.gates) {
    if (!qasm_ready(g)) {
      throw std::invalid_argument(
          "export_qasm: gate needs decompose_for_qasm first");
    }
    if (g.controls.empty()) {
      os << gate_kind_name(g.kind);
      if (is_rotation(g.kind)) os << "(" << format_angle(g.angle) << ")";
      os << " q[" << g.target << "];\n";
    } else {
      os << "c" << gate_kind_name(g.kind) << " q[" << g.controls[0].qubit
         << "],q[" << g.target << "];\n";
    }
  }
  return os.str();
}

Circuit parse_qasm(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Circuit c;
  bool saw_header = false, saw_qreg = false;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("parse_qasm: line " + std::to_string(lineno) +
                                ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line == "OPENQASM 2.0;") {
      saw_header = true;
      continue;
    }
    if (line.rfind("include", 0) == 0) continue;
    if (line.rfind("qreg q[", 0) == 0) {
      size_t close = line.find(']');
      if (close == std::string::npos || line.substr(close) != "];") {
        fail("malformed qreg");
      }
      c.n_qubits = std::stoi(line.substr(7, close - 7));
      saw_qreg = true;
      continue;
    }
    if (!saw_header || !saw_qreg) fail("gate before header/qreg");
    if (line.back() != ';') fail("missing semicolon");
    line.pop_back();

    size_t sp = line.find(' ');
    if (sp == std::string::npos) fail("missing operands");
    std::string head = line.substr(0, sp);
    std::string operands = line.substr(sp + 1);

    double angle = 0.0;
    bool has_angle = false;
    size_t paren = head.find('(');
    if (paren != std::string::npos) {
      if (head.back() != ')') fail("malformed parameter list");
      angle = std::stod(head.substr(paren + 1, head.size() - paren - 2));
      has_angle = true;
      head = head.substr(0, paren);
    }

    std::vector<int> qubits;
    std::istringstream ops(operands);
    std::string tok;
    while (std::getline(ops, tok, ',')) {
      if (tok.rfind("q[", 0) != 0 || tok.back() != ']') fail("bad operand " + tok);
      qubits.push_back(std::stoi(tok.substr(2, tok.size() - 3)));
    }

    bool controlled = head.size() == 2 && head[0] == 'c' && !has_angle;
    std::string base = controlled ? head.substr(1) : head;
    GateKind kind = gate_kind_from_name(base);
    if (is_rotation(kind) != has_angle) fail("parameter mismatch for " + head);
    if (controlled) {
      if (kind != GateKind::X && kind != GateKind::Y && kind != GateKind::Z) {
        fail("unsupported controlled gate " + head);
      }
      if (qubits.size() != 2) fail("controlled gate needs 2 operands");
      c.add({kind, 0.0, qubits[1], {{qubits[0], 1}}});
    } else {
      if (qubits.size() != 1) fail("single-qubit gate needs 1 operand");
      c.add({kind, angle, qubits[0], {}});
    }
  }
  if (!saw_header || !saw_qreg) {
    throw std::invalid_argument("parse_qasm: missing header or qreg");
  }
  return c;
}

}  // namespace pauliforge
