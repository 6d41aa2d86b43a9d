#pragma once

// Nearest-database classification: one pattern database per label, an
// affinity rho per database, and the label with the highest rho.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqm/circuits.hpp"
#include "pqm/core_model.hpp"
#include "pqm/resources.hpp"

namespace pqm {

struct LabelDatabase {
    std::string label;
    EncodingScheme scheme;
    std::vector<BitPattern> patterns;  // distinct, in first-appearance order
    std::size_t duplicates_removed = 0;

    std::size_t r() const noexcept { return patterns.size(); }
};

struct DatabaseBuild {
    std::vector<LabelDatabase> databases;
    std::vector<std::string> warnings;
};

/// Groups rows by label (first-appearance order), encodes them and removes
/// duplicate patterns.
DatabaseBuild build_databases(const LabeledDataset& dataset, const EncodingScheme& scheme);

/// Random split: `fraction` of the rows (rounded to nearest) go to the first
/// dataset, the rest to the second. Row order within each part is preserved.
std::pair<LabeledDataset, LabeledDataset> split_rows(const LabeledDataset& dataset, double fraction,
                                                     std::uint64_t seed);

/// How shots whose memory readout is not a stored pattern are treated.
enum class PostProcessing {
    CountAll,         // every shot counts towards N; acceptance decided by c alone
    DiscardUnstored,  // shots reading an unstored pattern are dropped from N
};

struct SamplingMode {
    enum class Kind { Exact, Sampled };
    Kind kind = Kind::Exact;
    std::size_t shots = 1;
    std::uint64_t seed = 0;
    PostProcessing post = PostProcessing::CountAll;

    static SamplingMode exact() { return {}; }
    static SamplingMode sampled(std::size_t shots, std::uint64_t seed,
                                PostProcessing post = PostProcessing::CountAll) {
        return {Kind::Sampled, shots, seed, post};
    }
};

struct ClassifierConfig {
    Method method{AlgorithmVariant::StorageFt, AlgorithmVariant::RetrievePqmFt};
    double nu = 1.0;
    SamplingMode mode;
    LayoutConvention convention = LayoutConvention::Theory;
    RetrievalOptions options;
    int max_qubits = kDefaultMaxQubits;
};

struct Affinity {
    std::string label;
    double rho = 0.0;
    std::uint64_t accepted = 0;  // M (sampled mode)
    std::uint64_t shots = 0;     // N (sampled mode)
    double p_accept = 0.0;       // exact accept probability of the circuit
    std::size_t r = 0;
    int qubits = 0;
};

struct AffinityResult {
    std::vector<Affinity> per_label;
    std::size_t chosen = 0;
    std::string label;
    bool tie = false;
};

Affinity affinity(const LabelDatabase& db, const Pattern& target, const ClassifierConfig& config);

/// Affinity against every database; ties (1e-12 in exact mode, equal counts
/// in sampled mode) go to the earliest database and set `tie`.
AffinityResult classify(const std::vector<LabelDatabase>& databases, const Pattern& target,
                        const ClassifierConfig& config);

}  // namespace pqm
