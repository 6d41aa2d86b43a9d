#include "pqm/resources.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "pqm/errors.hpp"

namespace pqm {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Pqm: return "pqm";
        case Algorithm::Ppqm: return "ppqm";
        case Algorithm::Eppqm: return "eppqm";
    }
    return "?";
}

std::string_view to_string(Variant v) { return v == Variant::Ft ? "ft" : "nisq"; }

Algorithm parse_algorithm(std::string_view text) {
    if (text == "pqm") return Algorithm::Pqm;
    if (text == "ppqm") return Algorithm::Ppqm;
    if (text == "eppqm") return Algorithm::Eppqm;
    throw DomainError("unknown algorithm '" + std::string(text) + "' (expected pqm, ppqm or eppqm)");
}

Variant parse_variant(std::string_view text) {
    if (text == "ft") return Variant::Ft;
    if (text == "nisq") return Variant::Nisq;
    throw DomainError("unknown variant '" + std::string(text) + "' (expected ft or nisq)");
}

Method method_for(Algorithm algorithm, Variant variant) {
    using AV = AlgorithmVariant;
    switch (algorithm) {
        case Algorithm::Pqm:
            // PQM is P-PQM at nu = 1; its near-term form is the P-PQM NISQ circuit.
            return variant == Variant::Ft ? Method{AV::StorageFt, AV::RetrievePqmFt}
                                          : Method{AV::StorageFt, AV::RetrievePpqmNisq};
        case Algorithm::Ppqm:
            return variant == Variant::Ft ? Method{AV::StorageFt, AV::RetrievePpqmFt}
                                          : Method{AV::StorageFt, AV::RetrievePpqmNisq};
        case Algorithm::Eppqm:
            return variant == Variant::Ft ? Method{AV::StorageFt, AV::RetrieveEppqmFt}
                                          : Method{AV::StorageEppqmNisq, AV::RetrieveEppqmNisq};
    }
    throw DomainError("unknown algorithm");
}

EncodingKind encoding_for(Algorithm algorithm) {
    return algorithm == Algorithm::Eppqm ? EncodingKind::Label : EncodingKind::OneHot;
}

std::size_t pattern_bits(std::size_t z, std::size_t a, EncodingKind encoding) {
    if (z == 0 || a == 0) {
        throw DomainError("z and a must be at least 1");
    }
    return z * (encoding == EncodingKind::OneHot ? one_hot_width(a) : label_width(a));
}

std::size_t pattern_bits(std::span<const std::size_t> alphabet_sizes, EncodingKind encoding) {
    if (alphabet_sizes.empty()) {
        throw DomainError("need at least one feature");
    }
    std::size_t n = 0;
    for (std::size_t a : alphabet_sizes) {
        n += pattern_bits(1, a, encoding);
    }
    return n;
}

std::size_t qubit_count(Algorithm algorithm, Variant variant, LayoutConvention convention, std::size_t z,
                        std::size_t a) {
    const std::vector<std::size_t> sizes(z, a);
    return qubit_count(algorithm, variant, convention, sizes);
}

std::size_t qubit_count(Algorithm algorithm, Variant variant, LayoutConvention convention,
                        std::span<const std::size_t> alphabet_sizes) {
    const std::size_t n = pattern_bits(alphabet_sizes, encoding_for(algorithm));
    if (algorithm != Algorithm::Eppqm) {
        return 2 * n + 2;
    }
    const std::size_t z = alphabet_sizes.size();
    const std::size_t extra = convention == LayoutConvention::Implementation ? 1 : 0;
    return (variant == Variant::Ft ? 2 * n : n) + z + 1 + extra;
}

GateTally storage_gate_counts(AlgorithmVariant variant, std::size_t n, std::size_t r, std::uint64_t database_ones) {
    if (!is_storage(variant)) {
        throw DomainError(std::string(to_string(variant)) + " is not a storage variant");
    }
    if (n == 0 || r == 0) {
        throw DomainError("n and r must be at least 1");
    }
    const std::uint64_t bits = static_cast<std::uint64_t>(n) * r;
    if (database_ones > bits) {
        throw DomainError("more 1-bits than stored bits");
    }
    GateTally t;
    if (variant == AlgorithmVariant::StorageFt) {
        add_count(t, {GateKind::Mcx, 1}, 2 * bits);
        add_count(t, {GateKind::Mcx, 2}, 2 * bits);
        add_count(t, {GateKind::X, 0}, 2 * bits);
    } else {
        add_count(t, {GateKind::Mcx, 1}, 2 * database_ones);
        add_count(t, {GateKind::X, 0}, 2 * (bits - database_ones));
    }
    add_count(t, {GateKind::Mcx, n}, 2 * static_cast<std::uint64_t>(r));
    add_count(t, {GateKind::Cs, 1}, r);
    return t;
}

namespace {

std::uint64_t round_tally(double fraction, std::uint64_t total) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw DomainError("bit fraction must lie in [0, 1]");
    }
    return static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(total)));
}

}  // namespace

GateTally storage_gate_counts_from_fraction(AlgorithmVariant variant, std::size_t n, std::size_t r, double gamma) {
    return storage_gate_counts(variant, n, r, round_tally(gamma, static_cast<std::uint64_t>(n) * r));
}

GateTally retrieval_gate_counts(AlgorithmVariant variant, std::span<const std::size_t> widths,
                                std::uint64_t target_ones) {
    if (is_storage(variant)) {
        throw DomainError(std::string(to_string(variant)) + " is not a retrieval variant");
    }
    if (widths.empty()) {
        throw DomainError("need at least one feature");
    }
    const std::uint64_t n = std::accumulate(widths.begin(), widths.end(), std::uint64_t{0});
    const std::uint64_t z = widths.size();
    if (target_ones > n) {
        throw DomainError("more 1-bits than target bits");
    }
    const bool ft = is_fault_tolerant(variant);
    const bool features = is_feature_level(variant);
    const std::uint64_t counting = features ? z : n;

    GateTally t;
    add_count(t, {GateKind::H, 0}, 2);
    add_count(t, {GateKind::DiagPhase, 0}, counting);
    add_count(t, {GateKind::CtrlDiagPhase, 1}, counting);
    if (ft) {
        add_count(t, {GateKind::Mcx, 1}, 2 * n);
        add_count(t, {GateKind::X, 0}, 2 * n + (features ? 2 * z : 0));
    } else if (variant == AlgorithmVariant::RetrievePpqmNisq) {
        add_count(t, {GateKind::X, 0}, 2 * target_ones);
    } else {
        add_count(t, {GateKind::X, 0}, 2 * (n - target_ones));
    }
    if (features) {
        for (std::size_t w : widths) {
            add_count(t, {GateKind::Mcx, w}, 2);
        }
    }
    return t;
}

GateTally retrieval_gate_counts_from_fraction(AlgorithmVariant variant, std::size_t z, std::size_t a, double delta) {
    const EncodingKind enc = is_feature_level(variant) ? EncodingKind::Label : EncodingKind::OneHot;
    const std::size_t width = pattern_bits(1, a, enc);
    const std::vector<std::size_t> widths(z, width);
    return retrieval_gate_counts(variant, widths, round_tally(delta, static_cast<std::uint64_t>(z) * width));
}

std::uint64_t measure_count(std::size_t n) { return static_cast<std::uint64_t>(n) + 1; }

double omega(double delta, std::size_t a) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw DomainError("delta must lie in [0, 1]");
    }
    if (a < 2) {
        throw DomainError("omega needs an alphabet of at least 2 values");
    }
    if (delta == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double ad = static_cast<double>(a);
    const double bits = static_cast<double>(label_width(a));
    return (delta / (1.0 - delta)) * (ad / bits);
}

long long savings_percent(std::uint64_t p, std::uint64_t ep) {
    if (p == 0) {
        throw DomainError("savings relative to zero");
    }
    // floor((200 (P - EP) + P) / (2 P)) == round_half_up(100 (P - EP) / P)
    const long long P = static_cast<long long>(p);
    const long long num = 200 * (P - static_cast<long long>(ep)) + P;
    const long long den = 2 * P;
    long long q = num / den;
    if (num % den != 0 && num < 0) {
        --q;
    }
    return q;
}

std::map<std::string, std::uint64_t> to_histogram(const GateTally& tally, std::uint64_t measurements) {
    std::map<std::string, std::uint64_t> hist;
    for (const auto& [key, count] : tally) {
        std::string bucket;
        switch (key.kind) {
            case GateKind::X: bucket = "x"; break;
            case GateKind::H: bucket = "h"; break;
            case GateKind::Mcx: bucket = mcx_bucket(key.controls); break;
            case GateKind::DiagPhase: bucket = "u"; break;
            case GateKind::CtrlDiagPhase: bucket = "cu"; break;
            case GateKind::Cs: bucket = "cs"; break;
            case GateKind::Measure: bucket = "measure"; break;
        }
        hist[bucket] += count;
    }
    if (measurements != 0) {
        hist["measure"] += measurements;
    }
    return hist;
}

InstanceStats InstanceStats::uniform(std::size_t z, std::size_t a, std::size_t r, double gamma, double delta) {
    InstanceStats s;
    s.alphabet_sizes.assign(z, a);
    s.r = r;
    s.gamma = gamma;
    s.delta = delta;
    return s;
}

std::optional<std::size_t> InstanceStats::uniform_a() const {
    if (alphabet_sizes.empty()) {
        return std::nullopt;
    }
    for (std::size_t a : alphabet_sizes) {
        if (a != alphabet_sizes.front()) {
            return std::nullopt;
        }
    }
    return alphabet_sizes.front();
}

void InstanceStats::validate() const {
    if (alphabet_sizes.empty()) {
        throw DomainError("z must be at least 1");
    }
    for (std::size_t a : alphabet_sizes) {
        if (a == 0) {
            throw DomainError("alphabet sizes must be at least 1");
        }
    }
    if (r == 0) {
        throw DomainError("r must be at least 1");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(delta >= 0.0 && delta <= 1.0)) {
        throw DomainError("gamma and delta must lie in [0, 1]");
    }
}

ResourceReport full_report(const InstanceStats& stats) {
    stats.validate();
    ResourceReport rep;
    rep.stats = stats;
    rep.n_one_hot = pattern_bits(stats.alphabet_sizes, EncodingKind::OneHot);
    rep.n_label = pattern_bits(stats.alphabet_sizes, EncodingKind::Label);

    auto widths_for = [&](EncodingKind enc) {
        std::vector<std::size_t> w;
        for (std::size_t a : stats.alphabet_sizes) {
            w.push_back(pattern_bits(1, a, enc));
        }
        return w;
    };

    const std::pair<Algorithm, Variant> order[] = {
        {Algorithm::Pqm, Variant::Ft},    {Algorithm::Ppqm, Variant::Ft},   {Algorithm::Ppqm, Variant::Nisq},
        {Algorithm::Eppqm, Variant::Ft}, {Algorithm::Eppqm, Variant::Nisq},
    };
    for (const auto& [algo, variant] : order) {
        VariantReport v;
        v.algorithm = algo;
        v.variant = variant;
        v.method = method_for(algo, variant);
        const EncodingKind enc = encoding_for(algo);
        const bool one_hot = enc == EncodingKind::OneHot;
        v.n = one_hot ? rep.n_one_hot : rep.n_label;
        v.qubits_theory = qubit_count(algo, variant, LayoutConvention::Theory, stats.alphabet_sizes);
        v.qubits_implementation = qubit_count(algo, variant, LayoutConvention::Implementation, stats.alphabet_sizes);

        const std::uint64_t stored_bits = static_cast<std::uint64_t>(v.n) * stats.r;
        std::uint64_t db_ones = 0;
        std::uint64_t target_ones = 0;
        if (stats.tallies) {
            db_ones = one_hot ? stats.tallies->database_ones_one_hot : stats.tallies->database_ones_label;
            target_ones = one_hot ? stats.tallies->target_ones_one_hot : stats.tallies->target_ones_label;
        } else {
            db_ones = round_tally(stats.gamma, stored_bits);
            target_ones = round_tally(stats.delta, v.n);
        }
        v.storage = storage_gate_counts(v.method.storage, v.n, stats.r, db_ones);
        v.retrieval = retrieval_gate_counts(v.method.retrieval, widths_for(enc), target_ones);
        v.measurements = measure_count(v.n);
        rep.variants.push_back(std::move(v));
    }

    rep.ppqm_qubits = qubit_count(Algorithm::Ppqm, Variant::Nisq, LayoutConvention::Theory, stats.alphabet_sizes);
    rep.eppqm_qubits =
        qubit_count(Algorithm::Eppqm, Variant::Nisq, LayoutConvention::Implementation, stats.alphabet_sizes);
    rep.savings_percent = savings_percent(rep.ppqm_qubits, rep.eppqm_qubits);
    rep.encoding_advantage = rep.eppqm_qubits < rep.ppqm_qubits;
    if (auto a = stats.uniform_a(); a && *a >= 2) {
        rep.omega = omega(stats.delta, *a);
    }
    return rep;
}

}  // namespace pqm
