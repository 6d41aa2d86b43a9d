#include "pqm/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "pqm/errors.hpp"

namespace pqm {

namespace {

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

// Index of the k-th basis state whose bit `target` is zero.
inline std::uint64_t insert_zero(std::uint64_t k, int target) {
    const std::uint64_t low = k & (bit(target) - 1);
    return ((k >> target) << (target + 1)) | low;
}

}  // namespace

// ------------------------------------------------------------------ GateOp

GateOp GateOp::x(int target) {
    GateOp op;
    op.kind = GateKind::X;
    op.target = target;
    return op;
}

GateOp GateOp::h(int target) {
    GateOp op;
    op.kind = GateKind::H;
    op.target = target;
    return op;
}

GateOp GateOp::cnot(int control, int target) { return mcx({control}, target); }

GateOp GateOp::mcx(std::vector<int> controls, int target) {
    if (controls.empty()) {
        return x(target);
    }
    GateOp op;
    op.kind = GateKind::Mcx;
    op.target = target;
    op.controls = std::move(controls);
    return op;
}

GateOp GateOp::diag_phase(int target, double theta) {
    GateOp op;
    op.kind = GateKind::DiagPhase;
    op.target = target;
    op.angle = theta;
    return op;
}

GateOp GateOp::ctrl_diag_phase(int control, int target, double theta) {
    GateOp op;
    op.kind = GateKind::CtrlDiagPhase;
    op.target = target;
    op.controls = {control};
    op.angle = theta;
    return op;
}

GateOp GateOp::cs(int control, int target, std::uint32_t j) {
    if (j == 0) {
        throw DomainError("CS^j requires j >= 1");
    }
    GateOp op;
    op.kind = GateKind::Cs;
    op.target = target;
    op.controls = {control};
    op.cs_j = j;
    return op;
}

GateOp GateOp::measure(std::vector<int> qubits) {
    GateOp op;
    op.kind = GateKind::Measure;
    op.measured = std::move(qubits);
    return op;
}

GateOp GateOp::tagged(OpTag t) const {
    GateOp copy = *this;
    copy.tag = t;
    return copy;
}

GateOp GateOp::inverse() const {
    GateOp inv = *this;
    switch (kind) {
        case GateKind::DiagPhase:
        case GateKind::CtrlDiagPhase:
            inv.angle = -angle;
            break;
        case GateKind::Cs:
            inv.cs_adjoint = !cs_adjoint;
            break;
        case GateKind::Measure:
            throw DomainError("a measurement has no inverse");
        default:
            break;  // X, H and MCX are self-inverse
    }
    return inv;
}

std::vector<int> GateOp::qubits() const {
    if (kind == GateKind::Measure) {
        return measured;
    }
    std::vector<int> qs = controls;
    qs.push_back(target);
    return qs;
}

std::string GateOp::name() const {
    switch (kind) {
        case GateKind::X: return "x";
        case GateKind::H: return "h";
        case GateKind::Mcx: return controls.size() == 1 ? "cnot" : "mcx" + std::to_string(controls.size());
        case GateKind::DiagPhase: return "diag_phase";
        case GateKind::CtrlDiagPhase: return "ctrl_diag_phase";
        case GateKind::Cs: return "cs" + std::to_string(cs_j);
        case GateKind::Measure: return "measure";
    }
    return "?";
}

CsBlock cs_block(std::uint32_t j) {
    if (j == 0) {
        throw DomainError("CS^j requires j >= 1");
    }
    const double jd = static_cast<double>(j);
    return {std::sqrt((jd - 1.0) / jd), 1.0 / std::sqrt(jd)};
}

// ------------------------------------------------------------ QuantumState

QuantumState QuantumState::zero(int num_qubits, int max_qubits) { return basis(num_qubits, 0, max_qubits); }

QuantumState QuantumState::basis(int num_qubits, std::uint64_t index, int max_qubits) {
    if (num_qubits < 1) {
        throw DomainError("a state needs at least one qubit");
    }
    if (num_qubits > max_qubits) {
        throw ResourceError("state needs " + std::to_string(num_qubits) + " qubits, cap is " +
                                std::to_string(max_qubits),
                            num_qubits, max_qubits);
    }
    if (num_qubits > 62) {
        throw ResourceError("state dimension overflows 64-bit indexing", num_qubits, 62);
    }
    std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    if (index >= amps.size()) {
        throw DomainError("basis index out of range");
    }
    amps[index] = 1.0;
    return QuantumState(num_qubits, std::move(amps));
}

QuantumState QuantumState::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw DomainError("amplitude count must be a power of two >= 2");
    }
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    QuantumState s(n, std::move(amplitudes));
    if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
        throw DomainError("amplitudes are not normalised");
    }
    return s;
}

void QuantumState::check_qubit(int q) const {
    if (q < 0 || q >= num_qubits_) {
        throw DomainError("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(num_qubits_) + " qubits");
    }
}

void QuantumState::apply(const GateOp& op) {
    if (op.kind == GateKind::Measure) {
        throw DomainError("measurement is not a unitary; use measure()");
    }
    check_qubit(op.target);
    std::uint64_t cmask = 0;
    for (int c : op.controls) {
        check_qubit(c);
        if (c == op.target || (cmask & bit(c))) {
            throw DomainError("control/target qubit collision on qubit " + std::to_string(c));
        }
        cmask |= bit(c);
    }

    const int t = op.target;
    const std::uint64_t tbit = bit(t);
    const std::uint64_t half = amps_.size() / 2;
    Complex* a = amps_.data();

    switch (op.kind) {
        case GateKind::X:
        case GateKind::Mcx:
            for (std::uint64_t k = 0; k < half; ++k) {
                const std::uint64_t i0 = insert_zero(k, t);
                if ((i0 & cmask) == cmask) {
                    std::swap(a[i0], a[i0 | tbit]);
                }
            }
            break;
        case GateKind::H: {
            const double s = std::numbers::sqrt2 / 2.0;
            for (std::uint64_t k = 0; k < half; ++k) {
                const std::uint64_t i0 = insert_zero(k, t);
                const Complex v0 = a[i0];
                const Complex v1 = a[i0 | tbit];
                a[i0] = s * (v0 + v1);
                a[i0 | tbit] = s * (v0 - v1);
            }
            break;
        }
        case GateKind::DiagPhase:
        case GateKind::CtrlDiagPhase: {
            const Complex phase = std::polar(1.0, op.angle);
            for (std::uint64_t k = 0; k < half; ++k) {
                const std::uint64_t i0 = insert_zero(k, t);
                if ((i0 & cmask) == cmask) {
                    a[i0] *= phase;
                }
            }
            break;
        }
        case GateKind::Cs: {
            const CsBlock b = cs_block(op.cs_j);
            const double off = op.cs_adjoint ? -b.off : b.off;
            for (std::uint64_t k = 0; k < half; ++k) {
                const std::uint64_t i0 = insert_zero(k, t);
                if ((i0 & cmask) == cmask) {
                    const Complex v0 = a[i0];
                    const Complex v1 = a[i0 | tbit];
                    a[i0] = b.diag * v0 + off * v1;
                    a[i0 | tbit] = -off * v0 + b.diag * v1;
                }
            }
            break;
        }
        case GateKind::Measure:
            break;
    }
}

double QuantumState::norm_squared() const {
    double s = 0.0;
    for (const auto& v : amps_) {
        s += std::norm(v);
    }
    return s;
}

double QuantumState::probability(int qubit, int outcome) const {
    check_qubit(qubit);
    if (outcome != 0 && outcome != 1) {
        throw DomainError("outcome must be 0 or 1");
    }
    const std::uint64_t b = bit(qubit);
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (((i & b) != 0) == (outcome == 1)) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

std::vector<double> QuantumState::marginal(std::span<const int> qubits) const {
    std::set<int> seen;
    for (int q : qubits) {
        check_qubit(q);
        if (!seen.insert(q).second) {
            throw DomainError("duplicate qubit in marginal");
        }
    }
    if (qubits.size() > 30) {
        throw DomainError("marginal over more than 30 qubits");
    }
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        const double p = std::norm(amps_[i]);
        if (p == 0.0) {
            continue;
        }
        std::uint64_t o = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            o |= ((i >> qubits[k]) & 1u) << k;
        }
        out[o] += p;
    }
    return out;
}

double QuantumState::collapse(std::span<const int> qubits, std::uint64_t outcome) {
    for (int q : qubits) {
        check_qubit(q);
    }
    double kept = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < qubits.size() && match; ++k) {
            match = ((i >> qubits[k]) & 1u) == ((outcome >> k) & 1u);
        }
        if (match) {
            kept += std::norm(amps_[i]);
        } else {
            amps_[i] = 0.0;
        }
    }
    if (kept <= 0.0) {
        throw DomainError("collapse onto a zero-probability outcome");
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& v : amps_) {
        v *= scale;
    }
    return kept;
}

QuantumState new_state(int num_qubits, int max_qubits) { return QuantumState::zero(num_qubits, max_qubits); }

QuantumState apply(QuantumState state, const GateOp& op) {
    state.apply(op);
    return state;
}

double probability(const QuantumState& state, int qubit, int outcome) { return state.probability(qubit, outcome); }

// ------------------------------------------------------------- Measurement

std::uint64_t MeasurementRecord::outcome() const {
    std::uint64_t o = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        o |= static_cast<std::uint64_t>(bits[k]) << k;
    }
    return o;
}

MeasurementRecord measure(QuantumState state, std::span<const int> qubits, Rng& rng) {
    if (qubits.empty()) {
        throw DomainError("measure needs at least one qubit");
    }
    const std::vector<double> dist = state.marginal(qubits);
    double total = 0.0;
    for (double p : dist) {
        total += p;
    }
    // Inverse-CDF sampling; outcomes with zero mass are never selected.
    const double u = rng.uniform() * total;
    std::uint64_t chosen = 0;
    double acc = 0.0;
    std::uint64_t last_nonzero = 0;
    for (std::uint64_t o = 0; o < dist.size(); ++o) {
        if (dist[o] <= 0.0) {
            continue;
        }
        last_nonzero = o;
        acc += dist[o];
        if (u < acc) {
            chosen = o;
            break;
        }
        chosen = last_nonzero;
    }
    state.collapse(qubits, chosen);
    MeasurementRecord rec{{qubits.begin(), qubits.end()}, {}, std::move(state)};
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        rec.bits.push_back(static_cast<int>((chosen >> k) & 1u));
    }
    return rec;
}

MeasurementRecord measure(QuantumState state, std::span<const int> qubits, std::uint64_t seed) {
    Rng rng(seed);
    return measure(std::move(state), qubits, rng);
}

}  // namespace pqm
