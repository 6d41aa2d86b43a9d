#pragma once

// OpenQASM 3 text export.

#include <span>
#include <string>

#include "pqm/circuits.hpp"

namespace pqm {

/// Qubit i of the circuit is q[i]. Measurement markers become classical bit
/// assignments in op order. Output depends only on the ops, so equal circuits
/// export to identical bytes.
std::string to_qasm(std::span<const GateOp> ops, int num_qubits);
/// Prepends X gates that take |0...0> to the circuit's documented initial state.
std::string to_qasm(const Circuit& circuit);

}  // namespace pqm
