#pragma once

// Dense complex statevector and the gate set used by the storage/retrieval
// circuits. Qubit 0 is the least-significant bit of a basis-state index.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pqm {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 26;

enum class GateKind {
    X,
    H,
    Mcx,            // X on target when every control is |1>; one control is CNOT
    DiagPhase,      // diag(e^{i angle}, 1)
    CtrlDiagPhase,  // diag(e^{i angle}, 1) on target when the control is |1>
    Cs,             // controlled S^j rotation used by storage
    Measure,        // terminal computational-basis measurement marker
};

/// Role of an operation inside a generated circuit. Only `Algorithm` ops are
/// part of the published gate inventories; the others are bookkeeping.
enum class OpTag {
    Algorithm,
    Load,   // X gates writing a classical pattern into the p register
    Init,   // register re-initialisation between storage and retrieval
    NuFix,  // control-qubit phase making NISQ retrieval exact for nu != 1
};

struct GateOp {
    GateKind kind = GateKind::X;
    int target = -1;
    std::vector<int> controls;
    double angle = 0.0;       // DiagPhase / CtrlDiagPhase
    std::uint32_t cs_j = 0;   // Cs
    bool cs_adjoint = false;  // Cs inverse (S^j transposed)
    std::vector<int> measured;  // Measure
    OpTag tag = OpTag::Algorithm;

    static GateOp x(int target);
    static GateOp h(int target);
    static GateOp cnot(int control, int target);
    static GateOp mcx(std::vector<int> controls, int target);
    static GateOp diag_phase(int target, double theta);
    static GateOp ctrl_diag_phase(int control, int target, double theta);
    static GateOp cs(int control, int target, std::uint32_t j);
    static GateOp measure(std::vector<int> qubits);

    GateOp tagged(OpTag t) const;
    GateOp inverse() const;
    /// Every qubit the op touches (controls first).
    std::vector<int> qubits() const;
    bool is_unitary() const noexcept { return kind != GateKind::Measure; }
    std::string name() const;
};

/// Entries of the 2x2 block S^j = [[sqrt((j-1)/j), 1/sqrt(j)], [-1/sqrt(j), sqrt((j-1)/j)]].
struct CsBlock {
    double diag;
    double off;  // upper-right entry; lower-left is -off
};
CsBlock cs_block(std::uint32_t j);

/// Seeded PRNG with a portable double conversion.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

class QuantumState {
public:
    /// |0...0> on `num_qubits` qubits; throws ResourceError above `max_qubits`.
    static QuantumState zero(int num_qubits, int max_qubits = kDefaultMaxQubits);
    static QuantumState basis(int num_qubits, std::uint64_t index, int max_qubits = kDefaultMaxQubits);
    static QuantumState from_amplitudes(std::vector<Complex> amplitudes);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return amps_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    /// Applies a unitary op in place. Measure ops are rejected here; use measure().
    void apply(const GateOp& op);

    double norm_squared() const;
    double probability(int qubit, int outcome) const;
    /// Joint outcome distribution of `qubits`; outcome bit k corresponds to qubits[k].
    std::vector<double> marginal(std::span<const int> qubits) const;

    /// Projects onto `outcome` for `qubits` and renormalises; returns the
    /// probability of that outcome before projection.
    double collapse(std::span<const int> qubits, std::uint64_t outcome);

private:
    QuantumState(int n, std::vector<Complex> amps) : num_qubits_(n), amps_(std::move(amps)) {}
    void check_qubit(int q) const;

    int num_qubits_ = 0;
    std::vector<Complex> amps_;
};

QuantumState new_state(int num_qubits, int max_qubits = kDefaultMaxQubits);
QuantumState apply(QuantumState state, const GateOp& op);
double probability(const QuantumState& state, int qubit, int outcome);

struct MeasurementRecord {
    std::vector<int> qubits;
    std::vector<int> bits;  // bits[k] is the outcome of qubits[k]
    QuantumState state;     // collapsed and renormalised

    std::uint64_t outcome() const;
};

MeasurementRecord measure(QuantumState state, std::span<const int> qubits, Rng& rng);
MeasurementRecord measure(QuantumState state, std::span<const int> qubits, std::uint64_t seed);

}  // namespace pqm
