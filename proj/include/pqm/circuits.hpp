#pragma once

// Gate-level construction of the storage and retrieval algorithms, their
// execution on the statevector engine, and depth / gate-count accounting.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqm/core_model.hpp"
#include "pqm/gate_tally.hpp"
#include "pqm/statevector.hpp"

namespace pqm {

enum class AlgorithmVariant {
    StorageFt,          // shared PQM / P-PQM / fault-tolerant EP-PQM storage
    StorageEppqmNisq,   // classically conditioned EP-PQM storage
    RetrievePqmFt,
    RetrievePpqmFt,
    RetrievePpqmNisq,
    RetrieveEppqmFt,
    RetrieveEppqmNisq,
};

std::string_view to_string(AlgorithmVariant v);
bool is_storage(AlgorithmVariant v);
bool is_fault_tolerant(AlgorithmVariant v);
/// EP-PQM retrieval compares features (needs the h register and widths).
bool is_feature_level(AlgorithmVariant v);
/// Control-qubit value that signals acceptance: 0 for fault-tolerant
/// retrieval, 1 for the NISQ variants.
int accept_outcome(AlgorithmVariant retrieval);

/// Where the footnoted implementation differs from the theoretical count: the
/// implementation keeps the whole h register fresh instead of reusing u_2.
enum class LayoutConvention { Theory, Implementation };

/// Named qubit registers over one contiguous qubit array.
///
/// p: input / target (n), u: storage auxiliary (2), m: memory (n),
/// c: retrieval control, h: feature-match (z). When storage and retrieval
/// share a circuit, c reuses u_1 and, under the theory convention, h_1
/// reuses u_2.
struct RegisterLayout {
    std::vector<int> p;
    std::vector<int> u;
    std::vector<int> m;
    std::vector<int> h;
    int c = -1;
    int num_qubits = 0;

    static RegisterLayout make(std::optional<AlgorithmVariant> storage,
                               std::optional<AlgorithmVariant> retrieval, std::size_t n, std::size_t z,
                               LayoutConvention convention = LayoutConvention::Theory);

    bool h_reuses_aux() const { return !h.empty() && u.size() == 2 && h.front() == u[1]; }
};

struct CircuitMetadata {
    std::optional<AlgorithmVariant> storage;
    std::optional<AlgorithmVariant> retrieval;
    std::size_t r = 0;
    std::size_t n = 0;
    std::size_t z = 0;
    double nu = 1.0;
    std::vector<std::size_t> widths;
    std::vector<BitPattern> database;
};

struct Circuit {
    RegisterLayout layout;
    std::vector<GateOp> ops;
    CircuitMetadata meta;
};

struct RetrievalOptions {
    /// Emit the NISQ phase block exactly as published. Without the control
    /// phase correction the NISQ accept probability is
    /// sin^2(pi (n - d) / (2 n nu)), which only matches the fault-tolerant
    /// cos^2(pi d / (2 n nu)) at nu = 1.
    bool literal_nisq_phase = false;
    /// Append terminal measurements of c and the memory register.
    bool measure = false;
};

Circuit build_storage(AlgorithmVariant variant, std::span<const BitPattern> database);
Circuit build_storage(AlgorithmVariant variant, std::span<const BitPattern> database,
                      const RegisterLayout& layout);

/// `widths` are the per-feature bit widths for feature-level retrieval; when
/// empty the target's own encoding widths are used.
Circuit build_retrieval(AlgorithmVariant variant, const BitPattern& target, double nu,
                        std::span<const std::size_t> widths = {}, RetrievalOptions options = {});
Circuit build_retrieval(AlgorithmVariant variant, const BitPattern& target, double nu,
                        std::span<const std::size_t> widths, const RegisterLayout& layout,
                        RetrievalOptions options = {});

struct ProgramSpec {
    AlgorithmVariant storage = AlgorithmVariant::StorageFt;
    AlgorithmVariant retrieval = AlgorithmVariant::RetrievePqmFt;
    double nu = 1.0;
    LayoutConvention convention = LayoutConvention::Theory;
    RetrievalOptions options;
};

/// Storage followed by retrieval on one shared layout.
Circuit build_program(const ProgramSpec& spec, std::span<const BitPattern> database, const BitPattern& target,
                      std::span<const std::size_t> widths = {});

/// Documented starting state: u = |u1=0, u2=1>, h all ones, everything else 0.
QuantumState initial_state(const Circuit& circuit, int max_qubits = kDefaultMaxQubits);

/// Applies the unitary ops in order; measurement markers are skipped.
/// Circuits that begin with storage require an empty memory register.
QuantumState execute(const Circuit& circuit, std::optional<QuantumState> initial = std::nullopt,
                     int max_qubits = kDefaultMaxQubits);

/// Probability that the control qubit reads the accepting value.
double accept_probability(const Circuit& circuit, const QuantumState& final_state);

/// Distribution over stored patterns conditioned on acceptance, in database
/// order. Empty when the accept probability is zero.
std::vector<double> accepted_pattern_distribution(const Circuit& circuit, const QuantumState& final_state);

/// Greedy as-soon-as-possible layering over qubit conflicts.
std::size_t depth(const Circuit& circuit);

/// Counts of algorithmic gates (LOAD / INIT / NU_FIX / measurements excluded).
GateTally tally(const Circuit& circuit);

/// Named buckets: x, h, cx, ccx, mcx (3-4 controls), mcx_gray (>= 5),
/// u (diagonal phase), cu (controlled phase), cs, measure, and separate
/// load / init / nu_fix buckets for the bookkeeping gates.
std::map<std::string, std::uint64_t> histogram(const Circuit& circuit);
std::string mcx_bucket(std::size_t controls);

}  // namespace pqm
