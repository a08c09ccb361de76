#pragma once

#include <string>

#include "pauliforge/circuits.hpp"

namespace pauliforge {

// Rewrites the circuit over the OpenQASM-exportable set: plain
// x/y/z/h/rx/ry/rz and singly value-1-controlled x/y/z. Controlled
// rotations reduce exactly to rz/ry/cx (rx via an H sandwich); value-0
// controls are wrapped in X. Multi-controlled Paulis reduce to the same
// set up to one global phase. Controlled H is not supported.
Circuit decompose_for_qasm(const Circuit& c);

// OpenQASM 2.0 text. The circuit must already be in exportable form (see
// decompose_for_qasm); angles are printed with 17 significant digits.
std::string export_qasm(const Circuit& c);

// Parses the subset of OpenQASM 2.0 emitted by export_qasm back into a
// circuit (single qreg named q; gates x,y,z,h,rx,ry,rz,cx,cy,cz).
Circuit parse_qasm(const std::string& text);

}  // namespace pauliforge
