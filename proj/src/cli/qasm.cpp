#include "pqm/qasm.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "pqm/errors.hpp"

namespace pqm {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string q(int i) { return "q[" + std::to_string(i) + "]"; }

std::string cs_gate_name(const GateOp& op) {
    return "cs_" + std::to_string(op.cs_j) + (op.cs_adjoint ? "_dg" : "");
}

}  // namespace

std::string to_qasm(std::span<const GateOp> ops, int num_qubits) {
    if (num_qubits < 1) {
        throw DomainError("export needs at least one qubit");
    }
    std::ostringstream out;
    out << "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";

    // CS^j blocks, once per distinct (j, adjoint), in first-use order.
    std::set<std::pair<std::uint32_t, bool>> defined;
    std::size_t bits = 0;
    for (const auto& op : ops) {
        if (op.kind == GateKind::Measure) {
            bits += op.measured.size();
        }
        if (op.kind != GateKind::Cs || !defined.insert({op.cs_j, op.cs_adjoint}).second) {
            continue;
        }
        const CsBlock b = cs_block(op.cs_j);
        const double off = op.cs_adjoint ? -b.off : b.off;
        const double alpha = std::atan2(b.off, b.diag);
        out << "// " << cs_gate_name(op) << ": controlled [[" << num(b.diag) << ", " << num(off) << "], ["
            << num(-off) << ", " << num(b.diag) << "]]\n";
        out << "gate " << cs_gate_name(op) << " c, t { cry(" << num(op.cs_adjoint ? 2.0 * alpha : -2.0 * alpha)
            << ") c, t; }\n";
    }

    out << "qubit[" << num_qubits << "] q;\n";
    if (bits != 0) {
        out << "bit[" << bits << "] c;\n";
    }

    std::size_t next_bit = 0;
    for (const auto& op : ops) {
        for (int qi : op.qubits()) {
            if (qi < 0 || qi >= num_qubits) {
                throw DomainError("op " + op.name() + " touches qubit " + std::to_string(qi) + " outside q[" +
                                  std::to_string(num_qubits) + "]");
            }
        }
        switch (op.kind) {
            case GateKind::X:
                out << "x " << q(op.target) << ";\n";
                break;
            case GateKind::H:
                out << "h " << q(op.target) << ";\n";
                break;
            case GateKind::Mcx:
                if (op.controls.size() == 1) {
                    out << "cx ";
                } else if (op.controls.size() == 2) {
                    out << "ccx ";
                } else {
                    out << "ctrl(" << op.controls.size() << ") @ x ";
                }
                for (int c : op.controls) {
                    out << q(c) << ", ";
                }
                out << q(op.target) << ";\n";
                break;
            case GateKind::DiagPhase:
                // diag(e^{i a}, 1) = e^{i a} diag(1, e^{-i a})
                out << "p(" << num(-op.angle) << ") " << q(op.target) << ";\n";
                out << "gphase(" << num(op.angle) << ");\n";
                break;
            case GateKind::CtrlDiagPhase:
                out << "p(" << num(op.angle) << ") " << q(op.controls[0]) << ";\n";
                out << "cp(" << num(-op.angle) << ") " << q(op.controls[0]) << ", " << q(op.target) << ";\n";
                break;
            case GateKind::Cs:
                out << cs_gate_name(op) << " " << q(op.controls[0]) << ", " << q(op.target) << ";\n";
                break;
            case GateKind::Measure:
                for (int m : op.measured) {
                    out << "c[" << next_bit++ << "] = measure " << q(m) << ";\n";
                }
                break;
        }
    }
    return out.str();
}

std::string to_qasm(const Circuit& circuit) {
    // Qubits start in |0>; prepare the documented starting state first.
    std::vector<GateOp> ops;
    const auto& l = circuit.layout;
    if (l.u.size() == 2) {
        ops.push_back(GateOp::x(l.u[1]).tagged(OpTag::Init));
    }
    for (int h : l.h) {
        if (l.u.size() != 2 || h != l.u[1]) {
            ops.push_back(GateOp::x(h).tagged(OpTag::Init));
        }
    }
    ops.insert(ops.end(), circuit.ops.begin(), circuit.ops.end());
    return to_qasm(ops, l.num_qubits);
}

}  // namespace pqm
