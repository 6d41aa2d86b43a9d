#include "pqm/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "pqm/errors.hpp"

namespace pqm {

std::string_view to_string(AlgorithmVariant v) {
    switch (v) {
        case AlgorithmVariant::StorageFt: return "storage_ft";
        case AlgorithmVariant::StorageEppqmNisq: return "storage_eppqm_nisq";
        case AlgorithmVariant::RetrievePqmFt: return "retrieve_pqm_ft";
        case AlgorithmVariant::RetrievePpqmFt: return "retrieve_ppqm_ft";
        case AlgorithmVariant::RetrievePpqmNisq: return "retrieve_ppqm_nisq";
        case AlgorithmVariant::RetrieveEppqmFt: return "retrieve_eppqm_ft";
        case AlgorithmVariant::RetrieveEppqmNisq: return "retrieve_eppqm_nisq";
    }
    return "?";
}

bool is_storage(AlgorithmVariant v) {
    return v == AlgorithmVariant::StorageFt || v == AlgorithmVariant::StorageEppqmNisq;
}

bool is_fault_tolerant(AlgorithmVariant v) {
    switch (v) {
        case AlgorithmVariant::StorageFt:
        case AlgorithmVariant::RetrievePqmFt:
        case AlgorithmVariant::RetrievePpqmFt:
        case AlgorithmVariant::RetrieveEppqmFt:
            return true;
        default:
            return false;
    }
}

bool is_feature_level(AlgorithmVariant v) {
    return v == AlgorithmVariant::RetrieveEppqmFt || v == AlgorithmVariant::RetrieveEppqmNisq;
}

int accept_outcome(AlgorithmVariant retrieval) {
    if (is_storage(retrieval)) {
        throw DomainError("accept_outcome needs a retrieval variant");
    }
    return is_fault_tolerant(retrieval) ? 0 : 1;
}

std::string to_string(const GateKey& key) {
    switch (key.kind) {
        case GateKind::X: return "x";
        case GateKind::H: return "h";
        case GateKind::Mcx:
            if (key.controls == 1) return "cnot";
            if (key.controls == 2) return "ccx";
            return "mcx(" + std::to_string(key.controls) + ")";
        case GateKind::DiagPhase: return "u";
        case GateKind::CtrlDiagPhase: return "gu";
        case GateKind::Cs: return "cs";
        case GateKind::Measure: return "measure";
    }
    return "?";
}

// ----------------------------------------------------------------- Layout

RegisterLayout RegisterLayout::make(std::optional<AlgorithmVariant> storage,
                                    std::optional<AlgorithmVariant> retrieval, std::size_t n, std::size_t z,
                                    LayoutConvention convention) {
    if (!storage && !retrieval) {
        throw DomainError("a layout needs a storage or a retrieval variant");
    }
    if (storage && !is_storage(*storage)) {
        throw DomainError(std::string(to_string(*storage)) + " is not a storage variant");
    }
    if (retrieval && is_storage(*retrieval)) {
        throw DomainError(std::string(to_string(*retrieval)) + " is not a retrieval variant");
    }
    if (n == 0) {
        throw DomainError("patterns must have at least one bit");
    }
    const bool feature_level = retrieval && is_feature_level(*retrieval);
    if (feature_level && (z == 0 || z > n)) {
        throw DomainError("feature count must lie in [1, n]");
    }

    RegisterLayout l;
    int next = 0;
    auto take = [&next](std::size_t count) {
        std::vector<int> qs(count);
        std::iota(qs.begin(), qs.end(), next);
        next += static_cast<int>(count);
        return qs;
    };
    const bool needs_p = (storage && is_fault_tolerant(*storage)) || (retrieval && is_fault_tolerant(*retrieval));
    if (needs_p) {
        l.p = take(n);
    }
    if (storage) {
        l.u = take(2);
    }
    l.m = take(n);
    if (retrieval) {
        l.c = l.u.empty() ? take(1).front() : l.u[0];
        if (feature_level) {
            if (!l.u.empty() && convention == LayoutConvention::Theory) {
                l.h.push_back(l.u[1]);
                auto rest = take(z - 1);
                l.h.insert(l.h.end(), rest.begin(), rest.end());
            } else {
                l.h = take(z);
            }
        }
    }
    l.num_qubits = next;
    return l;
}

namespace {

void require_layout_for(const RegisterLayout& l, AlgorithmVariant v) {
    const bool ft = is_fault_tolerant(v);
    if (ft && l.p.size() != l.m.size()) {
        throw DomainError(std::string(to_string(v)) + " needs an input register");
    }
    if (is_storage(v) && l.u.size() != 2) {
        throw DomainError("storage needs the two-qubit auxiliary register");
    }
    if (!is_storage(v) && l.c < 0) {
        throw DomainError("retrieval needs a control qubit");
    }
    if (is_feature_level(v) && l.h.empty()) {
        throw DomainError("feature-level retrieval needs the h register");
    }
}

std::vector<std::size_t> resolve_widths(const BitPattern& target, std::span<const std::size_t> widths) {
    std::vector<std::size_t> w(widths.begin(), widths.end());
    if (w.empty()) {
        w = target.widths();
    }
    const std::size_t sum = std::accumulate(w.begin(), w.end(), std::size_t{0});
    if (sum != target.size() || std::find(w.begin(), w.end(), std::size_t{0}) != w.end()) {
        throw DomainError("feature widths do not partition the " + std::to_string(target.size()) +
                          "-bit target");
    }
    return w;
}

void check_nu(double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw DomainError("nu must lie in (0, 1]");
    }
}

}  // namespace

// ---------------------------------------------------------------- Storage

Circuit build_storage(AlgorithmVariant variant, std::span<const BitPattern> database) {
    if (database.empty()) {
        throw DomainError("storage needs at least one pattern");
    }
    return build_storage(variant, database, RegisterLayout::make(variant, std::nullopt, database.front().size(), 0));
}

Circuit build_storage(AlgorithmVariant variant, std::span<const BitPattern> database,
                      const RegisterLayout& layout) {
    if (!is_storage(variant)) {
        throw DomainError(std::string(to_string(variant)) + " is not a storage variant");
    }
    if (database.empty()) {
        throw DomainError("storage needs at least one pattern");
    }
    require_layout_for(layout, variant);
    const std::size_t n = layout.m.size();
    std::set<BitPattern> seen;
    for (const auto& p : database) {
        if (p.size() != n) {
            throw DomainError("pattern length " + std::to_string(p.size()) + " does not match memory size " +
                              std::to_string(n));
        }
        if (!seen.insert(p).second) {
            throw DomainError("duplicate pattern " + p.to_string() + " in database");
        }
    }

    Circuit circ;
    circ.layout = layout;
    circ.meta.storage = variant;
    circ.meta.r = database.size();
    circ.meta.n = n;
    circ.meta.database.assign(database.begin(), database.end());
    auto& ops = circ.ops;
    const int u1 = layout.u[0];
    const int u2 = layout.u[1];
    const auto& m = layout.m;
    const auto& p = layout.p;
    const std::uint32_t r = static_cast<std::uint32_t>(database.size());

    for (std::uint32_t i = 1; i <= r; ++i) {
        const BitPattern& pattern = database[i - 1];
        const std::uint32_t j_cs = r + 1 - i;
        if (variant == AlgorithmVariant::StorageFt) {
            for (std::size_t j = 0; j < n; ++j) {
                if (pattern[j]) {
                    ops.push_back(GateOp::x(p[j]).tagged(OpTag::Load));
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(GateOp::mcx({p[j], u2}, m[j]));
            }
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(GateOp::cnot(p[j], m[j]));
                ops.push_back(GateOp::x(m[j]));
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(pattern[j] ? GateOp::cnot(u2, m[j]) : GateOp::x(m[j]));
            }
        }

        ops.push_back(GateOp::mcx(m, u1));
        ops.push_back(GateOp::cs(u1, u2, j_cs));
        ops.push_back(GateOp::mcx(m, u1));

        if (variant == AlgorithmVariant::StorageFt) {
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(GateOp::x(m[j]));
                ops.push_back(GateOp::cnot(p[j], m[j]));
            }
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(GateOp::mcx({p[j], u2}, m[j]));
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (pattern[j]) {
                    ops.push_back(GateOp::x(p[j]).tagged(OpTag::Load));
                }
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                ops.push_back(pattern[j] ? GateOp::cnot(u2, m[j]) : GateOp::x(m[j]));
            }
        }
    }
    return circ;
}

// -------------------------------------------------------------- Retrieval

Circuit build_retrieval(AlgorithmVariant variant, const BitPattern& target, double nu,
                        std::span<const std::size_t> widths, RetrievalOptions options) {
    const std::size_t z = is_feature_level(variant) ? resolve_widths(target, widths).size() : 0;
    return build_retrieval(variant, target, nu, widths,
                           RegisterLayout::make(std::nullopt, variant, target.size(), z), options);
}

Circuit build_retrieval(AlgorithmVariant variant, const BitPattern& target, double nu,
                        std::span<const std::size_t> widths, const RegisterLayout& layout,
                        RetrievalOptions options) {
    if (is_storage(variant)) {
        throw DomainError(std::string(to_string(variant)) + " is not a retrieval variant");
    }
    check_nu(nu);
    if (variant == AlgorithmVariant::RetrievePqmFt && nu != 1.0) {
        throw DomainError("PQM retrieval is the nu = 1 case; use P-PQM for other values");
    }
    require_layout_for(layout, variant);
    const std::size_t n = layout.m.size();
    if (target.size() != n) {
        throw DomainError("target length " + std::to_string(target.size()) + " does not match memory size " +
                          std::to_string(n));
    }
    const bool features = is_feature_level(variant);
    const bool ft = is_fault_tolerant(variant);
    std::vector<std::size_t> w;
    if (features) {
        w = resolve_widths(target, widths);
        if (w.size() != layout.h.size()) {
            throw DomainError("layout h register does not match the feature count");
        }
    }

    Circuit circ;
    circ.layout = layout;
    circ.meta.retrieval = variant;
    circ.meta.n = n;
    circ.meta.z = features ? w.size() : target.widths().size();
    circ.meta.nu = nu;
    circ.meta.widths = features ? w : target.widths();
    auto& ops = circ.ops;
    const auto& m = layout.m;
    const auto& p = layout.p;
    const auto& h = layout.h;
    const int c = layout.c;

    // Counting register: m for bit-level retrieval, h for feature-level.
    const std::vector<int>& counting = features ? h : m;
    const double theta = std::numbers::pi / (2.0 * static_cast<double>(counting.size()) * nu);

    std::vector<std::vector<int>> blocks;
    if (features) {
        std::size_t offset = 0;
        for (std::size_t width : w) {
            blocks.emplace_back(m.begin() + static_cast<std::ptrdiff_t>(offset),
                                m.begin() + static_cast<std::ptrdiff_t>(offset + width));
            offset += width;
        }
    }

    if (ft) {
        for (std::size_t j = 0; j < n; ++j) {
            if (target[j]) {
                ops.push_back(GateOp::x(p[j]).tagged(OpTag::Load));
            }
        }
    }
    ops.push_back(GateOp::h(c));

    // Comparison fan: afterwards m_j = 1 where memory and target agree (FT and
    // EP-PQM NISQ) or where they differ (P-PQM NISQ).
    if (ft) {
        for (std::size_t j = 0; j < n; ++j) {
            ops.push_back(GateOp::cnot(p[j], m[j]));
            ops.push_back(GateOp::x(m[j]));
        }
    } else {
        const bool flip_on = variant == AlgorithmVariant::RetrievePpqmNisq;
        for (std::size_t j = 0; j < n; ++j) {
            if (target[j] == flip_on) {
                ops.push_back(GateOp::x(m[j]));
            }
        }
    }

    if (features) {
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            ops.push_back(GateOp::mcx(blocks[j], h[j]));
            if (ft) {
                ops.push_back(GateOp::x(h[j]));
            }
        }
    }

    for (int q : counting) {
        ops.push_back(GateOp::diag_phase(q, theta));
    }
    for (int q : counting) {
        ops.push_back(GateOp::ctrl_diag_phase(c, q, -2.0 * theta));
    }

    if (features) {
        for (std::size_t j = blocks.size(); j-- > 0;) {
            if (ft) {
                ops.push_back(GateOp::x(h[j]));
            }
            ops.push_back(GateOp::mcx(blocks[j], h[j]));
        }
    }

    if (ft) {
        for (std::size_t j = n; j-- > 0;) {
            ops.push_back(GateOp::x(m[j]));
            ops.push_back(GateOp::cnot(p[j], m[j]));
        }
    } else {
        const bool flip_on = variant == AlgorithmVariant::RetrievePpqmNisq;
        for (std::size_t j = 0; j < n; ++j) {
            if (target[j] == flip_on) {
                ops.push_back(GateOp::x(m[j]));
            }
        }
        // The NISQ phase block counts agreements, so the c-branch phase is
        // pi/nu - 2 theta d instead of 2 theta d. One phase on c restores the
        // fault-tolerant dependence on d; it is the identity when nu = 1.
        if (!options.literal_nisq_phase && nu != 1.0) {
            ops.push_back(GateOp::diag_phase(c, std::numbers::pi - std::numbers::pi / nu).tagged(OpTag::NuFix));
        }
    }
    ops.push_back(GateOp::h(c));

    if (ft) {
        for (std::size_t j = 0; j < n; ++j) {
            if (target[j]) {
                ops.push_back(GateOp::x(p[j]).tagged(OpTag::Load));
            }
        }
    }
    if (options.measure) {
        ops.push_back(GateOp::measure({c}));
        for (int q : m) {
            ops.push_back(GateOp::measure({q}));
        }
    }
    return circ;
}

Circuit build_program(const ProgramSpec& spec, std::span<const BitPattern> database, const BitPattern& target,
                      std::span<const std::size_t> widths) {
    if (database.empty()) {
        throw DomainError("storage needs at least one pattern");
    }
    const std::size_t n = target.size();
    const std::size_t z = is_feature_level(spec.retrieval) ? resolve_widths(target, widths).size() : 0;
    const RegisterLayout layout = RegisterLayout::make(spec.storage, spec.retrieval, n, z, spec.convention);

    Circuit storage = build_storage(spec.storage, database, layout);
    Circuit retrieval = build_retrieval(spec.retrieval, target, spec.nu, widths, layout, spec.options);

    Circuit program;
    program.layout = layout;
    program.meta = retrieval.meta;
    program.meta.storage = spec.storage;
    program.meta.r = storage.meta.r;
    program.meta.database = std::move(storage.meta.database);
    program.ops = std::move(storage.ops);
    if (layout.h_reuses_aux()) {
        // Storage leaves u_2 in |0>; the reassigned h_1 must start in |1>.
        program.ops.push_back(GateOp::x(layout.u[1]).tagged(OpTag::Init));
    }
    program.ops.insert(program.ops.end(), retrieval.ops.begin(), retrieval.ops.end());
    return program;
}

// -------------------------------------------------------------- Execution

QuantumState initial_state(const Circuit& circuit, int max_qubits) {
    const auto& l = circuit.layout;
    std::uint64_t index = 0;
    if (l.u.size() == 2) {
        index |= std::uint64_t{1} << l.u[1];
    }
    for (int q : l.h) {
        index |= std::uint64_t{1} << q;
    }
    return QuantumState::basis(l.num_qubits, index, max_qubits);
}

QuantumState execute(const Circuit& circuit, std::optional<QuantumState> initial, int max_qubits) {
    const auto& l = circuit.layout;
    if (circuit.layout.num_qubits > max_qubits) {
        throw ResourceError("circuit needs " + std::to_string(l.num_qubits) + " qubits, cap is " +
                                std::to_string(max_qubits),
                            l.num_qubits, max_qubits);
    }
    QuantumState state = initial ? std::move(*initial) : initial_state(circuit, max_qubits);
    if (state.num_qubits() != l.num_qubits) {
        throw DomainError("initial state has " + std::to_string(state.num_qubits()) + " qubits, circuit needs " +
                          std::to_string(l.num_qubits));
    }
    if (circuit.meta.storage) {
        std::vector<int> regs = l.p;
        regs.insert(regs.end(), l.u.begin(), l.u.end());
        regs.insert(regs.end(), l.m.begin(), l.m.end());
        // Expected outcome: everything 0 except u_2 (position |p| + 1).
        const std::uint64_t expected = std::uint64_t{1} << (l.p.size() + 1);
        const double mass = state.marginal(regs)[expected];
        if (mass < 1.0 - 1e-10) {
            throw DomainError("storage requires empty input/memory registers and u = |01>");
        }
    }
    for (const auto& op : circuit.ops) {
        if (op.is_unitary()) {
            state.apply(op);
        }
    }
    return state;
}

double accept_probability(const Circuit& circuit, const QuantumState& final_state) {
    if (!circuit.meta.retrieval) {
        throw DomainError("circuit has no retrieval stage");
    }
    return final_state.probability(circuit.layout.c, accept_outcome(*circuit.meta.retrieval));
}

std::vector<double> accepted_pattern_distribution(const Circuit& circuit, const QuantumState& final_state) {
    if (!circuit.meta.retrieval) {
        throw DomainError("circuit has no retrieval stage");
    }
    const auto& l = circuit.layout;
    std::vector<int> qs{l.c};
    qs.insert(qs.end(), l.m.begin(), l.m.end());
    const std::vector<double> joint = final_state.marginal(qs);
    const std::uint64_t acc = static_cast<std::uint64_t>(accept_outcome(*circuit.meta.retrieval));
    double p_acc = 0.0;
    for (std::uint64_t o = 0; o < joint.size(); ++o) {
        if ((o & 1u) == acc) {
            p_acc += joint[o];
        }
    }
    std::vector<double> out;
    if (p_acc <= 0.0) {
        return out;
    }
    for (const auto& pattern : circuit.meta.database) {
        std::uint64_t o = acc;
        for (std::size_t j = 0; j < pattern.size(); ++j) {
            o |= static_cast<std::uint64_t>(pattern[j]) << (j + 1);
        }
        out.push_back(joint[o] / p_acc);
    }
    return out;
}

// ------------------------------------------------------------- Accounting

std::size_t depth(const Circuit& circuit) {
    std::vector<std::size_t> layer(static_cast<std::size_t>(circuit.layout.num_qubits), 0);
    std::size_t d = 0;
    for (const auto& op : circuit.ops) {
        std::size_t level = 0;
        const auto qs = op.qubits();
        for (int q : qs) {
            level = std::max(level, layer[static_cast<std::size_t>(q)]);
        }
        ++level;
        for (int q : qs) {
            layer[static_cast<std::size_t>(q)] = level;
        }
        d = std::max(d, level);
    }
    return d;
}

GateTally tally(const Circuit& circuit) {
    GateTally t;
    for (const auto& op : circuit.ops) {
        if (op.tag != OpTag::Algorithm || op.kind == GateKind::Measure) {
            continue;
        }
        add_count(t, {op.kind, op.controls.size()}, 1);
    }
    return t;
}

std::string mcx_bucket(std::size_t controls) {
    switch (controls) {
        case 0: return "x";
        case 1: return "cx";
        case 2: return "ccx";
        case 3:
        case 4: return "mcx";
        default: return "mcx_gray";
    }
}

std::map<std::string, std::uint64_t> histogram(const Circuit& circuit) {
    std::map<std::string, std::uint64_t> hist;
    for (const auto& op : circuit.ops) {
        switch (op.tag) {
            case OpTag::Load: ++hist["load"]; continue;
            case OpTag::Init: ++hist["init"]; continue;
            case OpTag::NuFix: ++hist["nu_fix"]; continue;
            case OpTag::Algorithm: break;
        }
        switch (op.kind) {
            case GateKind::X: ++hist["x"]; break;
            case GateKind::H: ++hist["h"]; break;
            case GateKind::Mcx: ++hist[mcx_bucket(op.controls.size())]; break;
            case GateKind::DiagPhase: ++hist["u"]; break;
            case GateKind::CtrlDiagPhase: ++hist["cu"]; break;
            case GateKind::Cs: ++hist["cs"]; break;
            case GateKind::Measure: hist["measure"] += op.measured.size(); break;
        }
    }
    return hist;
}

}  // namespace pqm
