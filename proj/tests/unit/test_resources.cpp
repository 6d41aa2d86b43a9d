#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pqm/circuits.hpp"
#include "pqm/errors.hpp"
#include "pqm/resources.hpp"

using namespace pqm;
using pqm::testing::Gen;
using AV = AlgorithmVariant;

namespace {

std::uint64_t count(const GateTally& t, GateKind k, std::size_t controls) {
    const auto it = t.find({k, controls});
    return it == t.end() ? 0 : it->second;
}

std::uint64_t ceil_log2(std::size_t a) {
    std::uint64_t b = 0;
    while ((std::size_t{1} << b) < a) {
        ++b;
    }
    return b;
}

std::map<std::string, std::uint64_t> algorithmic(std::map<std::string, std::uint64_t> h) {
    h.erase("load");
    h.erase("init");
    h.erase("nu_fix");
    return h;
}

}  // namespace

TEST_CASE("pattern bits") {
    CHECK(pattern_bits(4, 5, EncodingKind::OneHot) == 20);
    CHECK(pattern_bits(4, 5, EncodingKind::Label) == 12);
    CHECK(pattern_bits(22, 2, EncodingKind::OneHot) == 22);
    CHECK(pattern_bits(22, 2, EncodingKind::Label) == 22);
    CHECK(pattern_bits(3, 1, EncodingKind::Label) == 3);
    const std::vector<std::size_t> mixed{2, 100};
    CHECK(pattern_bits(mixed, EncodingKind::Label) == 8);
    CHECK_THROWS_AS(pattern_bits(0, 3, EncodingKind::Label), DomainError);
}

TEST_CASE("qubit counts of the published datasets") {
    struct Row {
        std::size_t z, a, ppqm, eppqm;
        long long savings;
    };
    const Row rows[] = {{4, 5, 42, 18, 57}, {9, 11, 200, 47, 77}, {22, 2, 46, 46, 0}, {9, 3, 56, 29, 48},
                        {16, 6, 194, 66, 66}};
    for (const auto& r : rows) {
        const auto p = qubit_count(Algorithm::Ppqm, Variant::Nisq, LayoutConvention::Theory, r.z, r.a);
        const auto e = qubit_count(Algorithm::Eppqm, Variant::Nisq, LayoutConvention::Implementation, r.z, r.a);
        CHECK(p == r.ppqm);
        CHECK(e == r.eppqm);
        CHECK(savings_percent(p, e) == r.savings);
    }
    // Theory convention: one qubit fewer than the implementation.
    CHECK(qubit_count(Algorithm::Eppqm, Variant::Nisq, LayoutConvention::Theory, 22, 2) == 45);
    CHECK(qubit_count(Algorithm::Eppqm, Variant::Ft, LayoutConvention::Theory, 4, 5) == 2 * 12 + 4 + 1);
    CHECK(qubit_count(Algorithm::Pqm, Variant::Ft, LayoutConvention::Theory, 4, 5) == 42);
}

TEST_CASE("savings rounding is half up") {
    CHECK(savings_percent(200, 47) == 77);  // 76.5
    CHECK(savings_percent(8, 7) == 13);     // 12.5
    CHECK(savings_percent(10, 10) == 0);
    CHECK(savings_percent(10, 11) == -10);
    CHECK(savings_percent(8, 9) == -12);  // -12.5 rounds up
    CHECK_THROWS_AS(savings_percent(0, 1), DomainError);
}

TEST_CASE("storage gate counts") {
    const auto ft = storage_gate_counts(AV::StorageFt, 20, 262, 0);
    CHECK(count(ft, GateKind::Mcx, 2) == 10480);
    CHECK(count(ft, GateKind::Mcx, 1) == 10480);
    CHECK(count(ft, GateKind::X, 0) == 10480);
    CHECK(count(ft, GateKind::Mcx, 20) == 524);
    CHECK(count(ft, GateKind::Cs, 1) == 262);

    // gamma = 1 with binary features: same CNOT count as the one-hot circuit.
    const std::size_t z = 7, r = 5;
    const auto ep_all_ones = storage_gate_counts(AV::StorageEppqmNisq, z, r, z * r);
    CHECK(count(ep_all_ones, GateKind::Mcx, 1) == 2 * z * r);
    CHECK(count(ep_all_ones, GateKind::X, 0) == 0);

    const auto ep_zero = storage_gate_counts_from_fraction(AV::StorageEppqmNisq, 12, 10, 0.0);
    CHECK(count(ep_zero, GateKind::Mcx, 1) == 0);
    CHECK(count(ep_zero, GateKind::X, 0) == 2 * 12 * 10);
    CHECK(count(ep_zero, GateKind::Mcx, 2) == 0);

    CHECK_THROWS_AS(storage_gate_counts(AV::RetrievePpqmFt, 3, 1, 0), DomainError);
    CHECK_THROWS_AS(storage_gate_counts(AV::StorageEppqmNisq, 3, 1, 4), DomainError);
    CHECK_THROWS_AS(storage_gate_counts_from_fraction(AV::StorageEppqmNisq, 3, 1, 1.5), DomainError);
}

TEST_CASE("retrieval gate counts") {
    const auto ep = retrieval_gate_counts_from_fraction(AV::RetrieveEppqmNisq, 4, 5, 0.3);
    CHECK(count(ep, GateKind::Mcx, 3) == 8);
    CHECK(count(ep, GateKind::DiagPhase, 0) == 4);
    CHECK(count(ep, GateKind::CtrlDiagPhase, 1) == 4);
    CHECK(count(ep, GateKind::H, 0) == 2);

    const auto nisq_zero = retrieval_gate_counts_from_fraction(AV::RetrievePpqmNisq, 3, 3, 0.0);
    CHECK(count(nisq_zero, GateKind::X, 0) == 0);

    const std::vector<std::size_t> nine(9, 1);
    const auto ft = retrieval_gate_counts(AV::RetrievePpqmFt, nine, 4);
    CHECK(count(ft, GateKind::Mcx, 1) == 18);
    CHECK(count(ft, GateKind::X, 0) == 18);
    CHECK(count(ft, GateKind::DiagPhase, 0) == 9);
    CHECK(count(ft, GateKind::CtrlDiagPhase, 1) == 9);
    CHECK(count(ft, GateKind::H, 0) == 2);
    CHECK(total(ft) == 56);

    const std::vector<std::size_t> mixed{1, 7, 3};
    const auto ep_ft = retrieval_gate_counts(AV::RetrieveEppqmFt, mixed, 0);
    CHECK(count(ep_ft, GateKind::Mcx, 1) == 2 * 11 + 2);  // fan CNOTs plus the width-1 feature
    CHECK(count(ep_ft, GateKind::Mcx, 7) == 2);
    CHECK(count(ep_ft, GateKind::Mcx, 3) == 2);
    CHECK(count(ep_ft, GateKind::X, 0) == 2 * 11 + 2 * 3);

    CHECK(measure_count(12) == 13);
    CHECK_THROWS_AS(retrieval_gate_counts(AV::StorageFt, mixed, 0), DomainError);
    CHECK_THROWS_AS(retrieval_gate_counts(AV::RetrievePpqmNisq, mixed, 12), DomainError);
}

TEST_CASE("omega") {
    CHECK(omega(0.4, 3) == 1.0);
    CHECK(omega(0.2, 16) == 1.0);
    CHECK(omega(0.0, 7) == 0.0);
    CHECK(omega(1.0, 5) == std::numeric_limits<double>::infinity());
    CHECK(omega(0.5, 4) == doctest::Approx(2.0));
    CHECK_THROWS_AS(omega(-0.1, 4), DomainError);
    CHECK_THROWS_AS(omega(0.5, 1), DomainError);
}

TEST_CASE("property: label encoding never needs more storage CNOTs or X gates") {
    for (std::size_t a = 3; a <= 64; ++a) {
        const double ratio = static_cast<double>(a) / static_cast<double>(ceil_log2(a));
        for (int k = 0; k <= 10; ++k) {
            const double gamma = k / 10.0;
            CHECK(ratio > gamma);
            CHECK(ratio + gamma > 1.0);

            const std::size_t z = 3, r = 4;
            const std::size_t n_o = z * a, n_l = z * ceil_log2(a);
            const auto p = storage_gate_counts(AV::StorageFt, n_o, r, 0);
            const auto e = storage_gate_counts_from_fraction(AV::StorageEppqmNisq, n_l, r, gamma);
            CHECK(count(p, GateKind::Mcx, 1) > count(e, GateKind::Mcx, 1));
            CHECK(count(p, GateKind::X, 0) > count(e, GateKind::X, 0));
        }
    }
}

TEST_CASE("property: fault-tolerant EP-PQM retrieval needs fewer X gates exactly when a >= 4") {
    for (std::size_t a = 2; a <= 64; ++a) {
        for (std::size_t z = 1; z <= 5; ++z) {
            const auto p = retrieval_gate_counts_from_fraction(AV::RetrievePpqmFt, z, a, 0.0);
            const auto e = retrieval_gate_counts_from_fraction(AV::RetrieveEppqmFt, z, a, 0.0);
            CHECK((count(e, GateKind::X, 0) < count(p, GateKind::X, 0)) == (a >= 4));
        }
    }
}

TEST_CASE("property: omega > 1 exactly when EP-PQM NISQ retrieval needs fewer X gates") {
    for (std::size_t a = 3; a <= 64; ++a) {
        const std::size_t z = 5;
        const std::size_t n_o = z * a, n_l = z * ceil_log2(a);
        for (int k = 0; k < 10; ++k) {
            const double delta = k / 10.0;
            // Same delta over both encodings, as in the inequality.
            const double p_x = 2.0 * delta * static_cast<double>(n_o);
            const double e_x = 2.0 * (1.0 - delta) * static_cast<double>(n_l);
            const double w = omega(delta, a);
            if (std::abs(w - 1.0) > 1e-9) {
                CHECK((w > 1.0) == (e_x < p_x));
            }
        }
    }
}

TEST_CASE("full report on a published shape") {
    const auto rep = full_report(InstanceStats::uniform(4, 5, 262, 0.25, 0.4));
    CHECK(rep.n_one_hot == 20);
    CHECK(rep.n_label == 12);
    CHECK(rep.ppqm_qubits == 42);
    CHECK(rep.eppqm_qubits == 18);
    CHECK(rep.savings_percent == 57);
    CHECK(rep.encoding_advantage);
    REQUIRE(rep.variants.size() == 5);
    const auto& ppqm_nisq = rep.variants[2];
    CHECK(count(ppqm_nisq.storage, GateKind::Mcx, 2) == 10480);
    const auto& ep_nisq = rep.variants[4];
    CHECK(count(ep_nisq.retrieval, GateKind::Mcx, 3) == 8);
    CHECK(ep_nisq.measurements == 13);
    REQUIRE(rep.omega);

    const auto spect = full_report(InstanceStats::uniform(22, 2, 10));
    CHECK_FALSE(spect.encoding_advantage);
    CHECK(spect.savings_percent == 0);

    InstanceStats bad = InstanceStats::uniform(2, 3, 0);
    CHECK_THROWS_AS(full_report(bad), DomainError);
}

TEST_CASE("property: closed-form counts equal the constructed circuits") {
    Gen g(41);
    for (int it = 0; it < 80; ++it) {
        const std::size_t z = g.index(1, 3);
        const std::size_t a = g.index(2, 5);
        const std::size_t r = g.index(1, 4);
        const auto oh = EncodingScheme::uniform(EncodingKind::OneHot, z, a);
        const auto lab = EncodingScheme::uniform(EncodingKind::Label, z, a);

        std::vector<Pattern> rows;
        std::set<std::vector<std::size_t>> seen;
        for (int tries = 0; rows.size() < r && tries < 50; ++tries) {
            Pattern p = g.pattern(z, a);
            if (seen.insert(p.features).second) {
                rows.push_back(p);
            }
        }
        const Pattern target = g.pattern(z, a);
        BitTallies t;
        std::vector<BitPattern> db_oh, db_lab;
        for (const auto& p : rows) {
            db_oh.push_back(encode(p, oh));
            db_lab.push_back(encode(p, lab));
            t.database_ones_one_hot += db_oh.back().count_ones();
            t.database_ones_label += db_lab.back().count_ones();
        }
        const BitPattern t_oh = encode(target, oh);
        const BitPattern t_lab = encode(target, lab);
        t.target_ones_one_hot = t_oh.count_ones();
        t.target_ones_label = t_lab.count_ones();

        InstanceStats stats = InstanceStats::uniform(z, a, rows.size());
        stats.tallies = t;
        const auto rep = full_report(stats);
        for (const auto& v : rep.variants) {
            const bool label = v.algorithm == Algorithm::Eppqm;
            const auto& db = label ? db_lab : db_oh;
            const auto& tg = label ? t_lab : t_oh;
            const double nu = v.algorithm == Algorithm::Pqm ? 1.0 : 0.7;
            RetrievalOptions opts;
            opts.measure = true;
            for (auto conv : {LayoutConvention::Theory, LayoutConvention::Implementation}) {
                const Circuit c =
                    build_program({v.method.storage, v.method.retrieval, nu, conv, opts}, db, tg, tg.widths());
                CHECK(tally(c) == merged(v.storage, v.retrieval));
                CHECK(algorithmic(histogram(c)) == to_histogram(merged(v.storage, v.retrieval), v.measurements));
                const std::size_t q = conv == LayoutConvention::Theory ? v.qubits_theory : v.qubits_implementation;
                CHECK(static_cast<std::size_t>(c.layout.num_qubits) == q);
            }
        }
    }
}
