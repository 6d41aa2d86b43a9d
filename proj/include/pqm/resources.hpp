#pragma once

// Closed-form qubit and gate counts for the storage / retrieval algorithms,
// evaluated without building circuits.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqm/circuits.hpp"
#include "pqm/core_model.hpp"
#include "pqm/gate_tally.hpp"

namespace pqm {

enum class Algorithm { Pqm, Ppqm, Eppqm };
enum class Variant { Ft, Nisq };

std::string_view to_string(Algorithm a);
std::string_view to_string(Variant v);
Algorithm parse_algorithm(std::string_view text);
Variant parse_variant(std::string_view text);

/// Storage / retrieval pair used for an algorithm family. PQM and P-PQM use
/// the shared storage circuit; only EP-PQM NISQ has classically conditioned
/// storage. PQM has no NISQ variant.
struct Method {
    AlgorithmVariant storage;
    AlgorithmVariant retrieval;
};
Method method_for(Algorithm algorithm, Variant variant);
/// Encoding the algorithm family stores: one-hot for (P-)PQM, label for EP-PQM.
EncodingKind encoding_for(Algorithm algorithm);

std::size_t pattern_bits(std::size_t z, std::size_t a, EncodingKind encoding);
std::size_t pattern_bits(std::span<const std::size_t> alphabet_sizes, EncodingKind encoding);

/// Qubits of the combined storage + retrieval circuit.
std::size_t qubit_count(Algorithm algorithm, Variant variant, LayoutConvention convention, std::size_t z,
                        std::size_t a);
std::size_t qubit_count(Algorithm algorithm, Variant variant, LayoutConvention convention,
                        std::span<const std::size_t> alphabet_sizes);

/// Storage gates for r patterns of n bits. `database_ones` is the number of
/// 1-bits over all stored patterns (only the EP-PQM NISQ variant uses it).
GateTally storage_gate_counts(AlgorithmVariant variant, std::size_t n, std::size_t r,
                              std::uint64_t database_ones);
/// Same with gamma as a fraction; the bit tally is rounded to the nearest integer.
GateTally storage_gate_counts_from_fraction(AlgorithmVariant variant, std::size_t n, std::size_t r, double gamma);

/// Retrieval gates for a target with the given feature widths and 1-bit count.
/// Feature-level variants get one MCX(d_j) pair per feature.
GateTally retrieval_gate_counts(AlgorithmVariant variant, std::span<const std::size_t> widths,
                                std::uint64_t target_ones);
/// Uniform alphabet form: n and widths follow from (z, a) and the encoding the
/// variant stores; delta is rounded to the nearest bit tally.
GateTally retrieval_gate_counts_from_fraction(AlgorithmVariant variant, std::size_t z, std::size_t a, double delta);

/// One measurement per memory qubit plus the control qubit.
std::uint64_t measure_count(std::size_t n);

/// (delta / (1 - delta)) * (a / ceil(log2 a)). Returns +infinity at delta = 1.
/// Values above 1 mean EP-PQM needs fewer X gates in NISQ retrieval.
double omega(double delta, std::size_t a);

/// Table-style integer percent (P - EP) / P, rounded half up.
long long savings_percent(std::uint64_t p, std::uint64_t ep);

/// Maps a tally onto the circuits::histogram bucket names.
std::map<std::string, std::uint64_t> to_histogram(const GateTally& tally, std::uint64_t measurements = 0);

/// Exact 1-bit counts, per encoding, for the stored database and the target.
struct BitTallies {
    std::uint64_t database_ones_one_hot = 0;
    std::uint64_t database_ones_label = 0;
    std::uint64_t target_ones_one_hot = 0;
    std::uint64_t target_ones_label = 0;
};

struct InstanceStats {
    std::vector<std::size_t> alphabet_sizes;  // one per feature
    std::size_t r = 1;
    double gamma = 0.0;
    double delta = 0.0;
    std::optional<BitTallies> tallies;  // preferred over gamma / delta when present

    static InstanceStats uniform(std::size_t z, std::size_t a, std::size_t r, double gamma = 0.0,
                                 double delta = 0.0);
    std::size_t z() const noexcept { return alphabet_sizes.size(); }
    /// The common alphabet size, if every feature has the same one.
    std::optional<std::size_t> uniform_a() const;
    void validate() const;
};

struct VariantReport {
    Algorithm algorithm = Algorithm::Ppqm;
    Variant variant = Variant::Ft;
    Method method{AlgorithmVariant::StorageFt, AlgorithmVariant::RetrievePpqmFt};
    std::size_t n = 0;
    std::size_t qubits_theory = 0;
    std::size_t qubits_implementation = 0;
    GateTally storage;
    GateTally retrieval;
    std::uint64_t measurements = 0;
};

struct ResourceReport {
    InstanceStats stats;
    std::size_t n_one_hot = 0;
    std::size_t n_label = 0;
    std::vector<VariantReport> variants;  // PQM FT, P-PQM FT, P-PQM NISQ, EP-PQM FT, EP-PQM NISQ
    /// Headline qubit comparison: P-PQM (2 n_o + 2) against EP-PQM NISQ in the
    /// implementation convention.
    std::size_t ppqm_qubits = 0;
    std::size_t eppqm_qubits = 0;
    long long savings_percent = 0;
    bool encoding_advantage = true;
    /// Present for a uniform alphabet with a >= 2.
    std::optional<double> omega;
};

ResourceReport full_report(const InstanceStats& stats);

}  // namespace pqm
