#pragma once

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "evq/error.hpp"
#include "evq/statevector.hpp"

namespace evq {

enum class GateKind { cnot, rz, h, rx };

/// RZ(t) = exp(-i t Z / 2), RX(t) = exp(-i t X / 2).
struct Gate {
  GateKind kind = GateKind::h;
  int target = 0;
  int control = -1;  // CNOT only
  double angle = 0.0;

  static Gate cnot(int control, int target) { return {GateKind::cnot, target, control, 0.0}; }
  static Gate rz(int q, double angle) { return {GateKind::rz, q, -1, angle}; }
  static Gate h(int q) { return {GateKind::h, q, -1, 0.0}; }
  static Gate rx(int q, double angle) { return {GateKind::rx, q, -1, angle}; }
};

struct GateCounts {
  std::size_t cnot = 0;
  std::size_t rz = 0;
  std::size_t h = 0;
  std::size_t rx = 0;
};

struct GateList {
  int qubits = 0;
  std::vector<Gate> gates;

  void push(const Gate& g) {
    if (g.target < 0 || g.target >= qubits || (g.kind == GateKind::cnot && (g.control < 0 || g.control >= qubits)))
      throw DomainError("gate qubit index outside register");
    if (g.kind == GateKind::cnot && g.control == g.target) throw DomainError("CNOT control equals target");
    gates.push_back(g);
  }

  void append(const GateList& other) {
    for (const auto& g : other.gates) push(g);
  }

  GateCounts counts() const {
    GateCounts c;
    for (const auto& g : gates) {
      switch (g.kind) {
        case GateKind::cnot: ++c.cnot; break;
        case GateKind::rz: ++c.rz; break;
        case GateKind::h: ++c.h; break;
        case GateKind::rx: ++c.rx; break;
      }
    }
    return c;
  }
};

inline void apply_gate(StateVector& s, const Gate& g) {
  auto amps = s.amplitudes();
  const std::size_t dim = amps.size();
  const std::size_t t = std::size_t{1} << g.target;
  switch (g.kind) {
    case GateKind::cnot: {
      const std::size_t c = std::size_t{1} << g.control;
      for (std::size_t z = 0; z < dim; ++z)
        if ((z & c) && !(z & t)) std::swap(amps[z], amps[z | t]);
      break;
    }
    case GateKind::rz: {
      const Complex lo = std::polar(1.0, -g.angle / 2.0);
      const Complex hi = std::polar(1.0, g.angle / 2.0);
      for (std::size_t z = 0; z < dim; ++z) amps[z] *= (z & t) ? hi : lo;
      break;
    }
    case GateKind::h: {
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t z = 0; z < dim; ++z)
        if (!(z & t)) {
          const Complex a0 = amps[z];
          const Complex a1 = amps[z | t];
          amps[z] = r * (a0 + a1);
          amps[z | t] = r * (a0 - a1);
        }
      break;
    }
    case GateKind::rx: {
      const double c = std::cos(g.angle / 2.0);
      const Complex ms(0.0, -std::sin(g.angle / 2.0));
      for (std::size_t z = 0; z < dim; ++z)
        if (!(z & t)) {
          const Complex a0 = amps[z];
          const Complex a1 = amps[z | t];
          amps[z] = c * a0 + ms * a1;
          amps[z | t] = ms * a0 + c * a1;
        }
      break;
    }
  }
}

inline void simulate(const GateList& circuit, StateVector& s) {
  if (circuit.qubits != s.qubits()) throw DomainError("circuit width does not match state");
  for (const auto& g : circuit.gates) apply_gate(s, g);
}

/// OpenQASM 2 text, one gate per line.
inline std::string to_qasm(const GateList& circuit) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << circuit.qubits << "];\n";
  for (const auto& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::cnot: os << "cx q[" << g.control << "],q[" << g.target << "];\n"; break;
      case GateKind::rz: os << "rz(" << g.angle << ") q[" << g.target << "];\n"; break;
      case GateKind::h: os << "h q[" << g.target << "];\n"; break;
      case GateKind::rx: os << "rx(" << g.angle << ") q[" << g.target << "];\n"; break;
    }
  }
  return os.str();
}

}  // namespace evq
