#include "pqm/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "pqm/errors.hpp"

namespace pqm {

DatabaseBuild build_databases(const LabeledDataset& dataset, const EncodingScheme& scheme) {
    if (dataset.rows().empty()) {
        throw DomainError("dataset has no rows");
    }
    if (scheme.num_features() != dataset.num_features()) {
        throw DomainError("encoding covers " + std::to_string(scheme.num_features()) + " features, dataset has " +
                          std::to_string(dataset.num_features()));
    }
    DatabaseBuild out;
    for (const auto& label : dataset.labels()) {
        LabelDatabase db{label, scheme, {}, 0};
        std::set<BitPattern> seen;
        for (const auto& row : dataset.rows()) {
            if (row.label != label) {
                continue;
            }
            BitPattern bits = encode(row.pattern, scheme);
            if (seen.insert(bits).second) {
                db.patterns.push_back(std::move(bits));
            } else {
                ++db.duplicates_removed;
            }
        }
        if (db.patterns.empty()) {
            out.warnings.push_back("label '" + label + "' has no rows; skipped");
            continue;
        }
        if (db.duplicates_removed != 0) {
            out.warnings.push_back("label '" + label + "': removed " + std::to_string(db.duplicates_removed) +
                                   " duplicate pattern(s)");
        }
        out.databases.push_back(std::move(db));
    }
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split_rows(const LabeledDataset& dataset, double fraction,
                                                     std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw DomainError("split fraction must lie in [0, 1]");
    }
    const std::size_t total = dataset.rows().size();
    const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the portable Rng so splits match across standard libraries.
    Rng rng(seed);
    for (std::size_t i = total; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.next() % i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<bool> chosen(total, false);
    for (std::size_t k = 0; k < keep; ++k) {
        chosen[order[k]] = true;
    }
    LabeledDataset first(dataset.feature_names(), dataset.alphabets());
    LabeledDataset second(dataset.feature_names(), dataset.alphabets());
    for (std::size_t i = 0; i < total; ++i) {
        const auto& row = dataset.rows()[i];
        (chosen[i] ? first : second).add(row.pattern, row.label);
    }
    return {std::move(first), std::move(second)};
}

Affinity affinity(const LabelDatabase& db, const Pattern& target, const ClassifierConfig& config) {
    if (db.patterns.empty()) {
        throw DomainError("database '" + db.label + "' is empty");
    }
    if (config.mode.kind == SamplingMode::Kind::Sampled && config.mode.shots == 0) {
        throw DomainError("sampled mode needs at least one shot");
    }
    const BitPattern t = encode(target, db.scheme);
    ProgramSpec spec{config.method.storage, config.method.retrieval, config.nu, config.convention, config.options};
    const Circuit circuit = build_program(spec, db.patterns, t, db.scheme.widths());
    if (circuit.layout.num_qubits > config.max_qubits) {
        throw ResourceError("label '" + db.label + "' needs " + std::to_string(circuit.layout.num_qubits) +
                                " qubits, cap is " + std::to_string(config.max_qubits),
                            circuit.layout.num_qubits, config.max_qubits);
    }
    const QuantumState state = execute(circuit, std::nullopt, config.max_qubits);

    Affinity a;
    a.label = db.label;
    a.r = db.r();
    a.qubits = circuit.layout.num_qubits;
    a.p_accept = accept_probability(circuit, state);
    if (config.mode.kind == SamplingMode::Kind::Exact) {
        a.rho = a.p_accept;
        return a;
    }

    // The circuit is deterministic up to the final readout, so each shot is a
    // fresh measurement of (c, m) on the same pre-measurement state.
    const auto& l = circuit.layout;
    std::vector<int> qs{l.c};
    qs.insert(qs.end(), l.m.begin(), l.m.end());
    const std::vector<double> joint = state.marginal(qs);
    std::vector<double> cdf(joint.size());
    std::partial_sum(joint.begin(), joint.end(), cdf.begin());

    std::set<std::uint64_t> stored;
    for (const auto& p : db.patterns) {
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            code |= static_cast<std::uint64_t>(p[j]) << j;
        }
        stored.insert(code);
    }
    const std::uint64_t acc = static_cast<std::uint64_t>(accept_outcome(*circuit.meta.retrieval));
    Rng rng(config.mode.seed);
    for (std::size_t s = 0; s < config.mode.shots; ++s) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto o = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        while (joint[o] <= 0.0 && o > 0) {
            --o;
        }
        if (config.mode.post == PostProcessing::DiscardUnstored && !stored.contains(o >> 1)) {
            continue;
        }
        ++a.shots;
        if ((o & 1u) == acc) {
            ++a.accepted;
        }
    }
    a.rho = a.shots == 0 ? 0.0 : static_cast<double>(a.accepted) / static_cast<double>(a.shots);
    return a;
}

AffinityResult classify(const std::vector<LabelDatabase>& databases, const Pattern& target,
                        const ClassifierConfig& config) {
    if (databases.empty()) {
        throw DomainError("classification needs at least one database");
    }
    AffinityResult res;
    for (const auto& db : databases) {
        res.per_label.push_back(affinity(db, target, config));
    }
    const double tol = config.mode.kind == SamplingMode::Kind::Exact ? 1e-12 : 0.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.per_label.size(); ++i) {
        if (res.per_label[i].rho > res.per_label[best].rho + tol) {
            best = i;
        }
    }
    for (std::size_t i = 0; i < res.per_label.size(); ++i) {
        if (i != best && std::abs(res.per_label[i].rho - res.per_label[best].rho) <= tol) {
            res.tie = true;
        }
    }
    res.chosen = best;
    res.label = res.per_label[best].label;
    return res;
}

}  // namespace pqm
