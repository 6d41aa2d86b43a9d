#include "pqm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "pqm/circuits.hpp"
#include "pqm/classifier.hpp"
#include "pqm/core_model.hpp"
#include "pqm/csv.hpp"
#include "pqm/errors.hpp"
#include "pqm/qasm.hpp"
#include "pqm/resources.hpp"

namespace pqm::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Rounded to 12 significant digits for reports; round-off residue below 1e-15 reads as 0.
double sig12(double v) { return std::abs(v) < 1e-15 ? 0.0 : std::strtod(fmt12(v).c_str(), nullptr); }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(' ');
        const auto e = cur.find_last_not_of(' ');
        parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

LayoutConvention parse_layout(const std::string& s) {
    return s == "implementation" ? LayoutConvention::Implementation : LayoutConvention::Theory;
}

json tally_json(const GateTally& t) {
    json j = json::object();
    for (const auto& [k, v] : t) {
        j[to_string(k)] = v;
    }
    return j;
}

json hist_json(const std::map<std::string, std::uint64_t>& h) {
    json j = json::object();
    for (const auto& [k, v] : h) {
        j[k] = v;
    }
    return j;
}

json omega_json(const std::optional<double>& w) {
    if (!w) {
        return nullptr;
    }
    if (std::isinf(*w)) {
        return "unbounded";
    }
    return sig12(*w);
}

// ------------------------------------------------------------ Inputs

struct Loaded {
    CsvTable table;
    std::string label_col;
    LabeledDataset dataset;
};

Loaded load(const RunConfig& cfg) {
    CsvTable table = read_csv(cfg.data);
    std::string label_col = cfg.label_col.empty() ? table.header.back() : cfg.label_col;
    LabeledDataset ds = dataset_from_csv(table, label_col);
    return {std::move(table), std::move(label_col), std::move(ds)};
}

/// One storage + retrieval problem: a database of bit patterns and a target.
struct Instance {
    std::string label;
    std::vector<BitPattern> patterns;
    std::vector<std::size_t> widths;
    BitPattern target;
};

EncodingKind encoding_kind(const RunConfig& cfg) {
    return cfg.encoding.empty() ? encoding_for(parse_algorithm(cfg.algo)) : parse_encoding_kind(cfg.encoding);
}

std::vector<Instance> instances(const RunConfig& cfg) {
    if (cfg.target.empty()) {
        throw DomainError("--target is required");
    }
    std::vector<Instance> out;
    if (!cfg.data.empty()) {
        const Loaded in = load(cfg);
        const auto scheme = EncodingScheme::for_alphabets(encoding_kind(cfg), in.dataset.alphabets());
        const Pattern target = pattern_from_fields(in.dataset, in.table.header, split(cfg.target, ','), in.label_col);
        for (auto& db : build_databases(in.dataset, scheme).databases) {
            out.push_back({db.label, std::move(db.patterns), scheme.widths(), encode(target, scheme)});
        }
        return out;
    }
    if (cfg.patterns.empty()) {
        throw DomainError("give either --data or --patterns");
    }
    Instance inst;
    inst.label = "patterns";
    for (const auto& p : split(cfg.patterns, ',')) {
        inst.patterns.push_back(BitPattern::from_string(p));
    }
    inst.target = BitPattern::from_string(cfg.target);
    if (!cfg.widths.empty()) {
        for (const auto& w : split(cfg.widths, ',')) {
            inst.widths.push_back(static_cast<std::size_t>(std::stoul(w)));
        }
    } else {
        inst.widths = {inst.target.size()};
    }
    out.push_back(std::move(inst));
    return out;
}

ProgramSpec program_spec(const RunConfig& cfg) {
    const Method m = method_for(parse_algorithm(cfg.algo), parse_variant(cfg.variant));
    RetrievalOptions opts{cfg.literal_nisq_phase, cfg.measure};
    return {m.storage, m.retrieval, cfg.nu, parse_layout(cfg.layout), opts};
}

Circuit build_checked(const RunConfig& cfg, const Instance& inst) {
    Circuit c = build_program(program_spec(cfg), inst.patterns, inst.target, inst.widths);
    if (c.layout.num_qubits > cfg.max_qubits) {
        throw ResourceError("'" + inst.label + "' needs " + std::to_string(c.layout.num_qubits) +
                                " qubits, cap is " + std::to_string(cfg.max_qubits) + " (raise --max-qubits)",
                            c.layout.num_qubits, cfg.max_qubits);
    }
    return c;
}

std::vector<std::size_t> distances(const Instance& inst, bool features) {
    std::vector<std::size_t> d;
    for (const auto& p : inst.patterns) {
        if (!features) {
            d.push_back(hamming_bits(p, inst.target));
            continue;
        }
        std::size_t off = 0;
        std::size_t mismatched = 0;
        for (std::size_t w : inst.widths) {
            bool differ = false;
            for (std::size_t k = off; k < off + w; ++k) {
                differ = differ || p[k] != inst.target[k];
            }
            mismatched += differ ? 1 : 0;
            off += w;
        }
        d.push_back(mismatched);
    }
    return d;
}

// ---------------------------------------------------------- estimate

InstanceStats stats_from_data(const RunConfig& cfg) {
    const Loaded in = load(cfg);
    const auto& ds = in.dataset;
    InstanceStats s;
    for (const auto& a : ds.alphabets()) {
        s.alphabet_sizes.push_back(a.size());
    }
    const auto one_hot = EncodingScheme::for_alphabets(EncodingKind::OneHot, ds.alphabets());
    const auto label = EncodingScheme::for_alphabets(EncodingKind::Label, ds.alphabets());
    std::set<std::vector<std::size_t>> distinct;
    BitTallies t;
    for (const auto& row : ds.rows()) {
        if (distinct.insert(row.pattern.features).second) {
            t.database_ones_one_hot += encode(row.pattern, one_hot).count_ones();
            t.database_ones_label += encode(row.pattern, label).count_ones();
        }
    }
    if (distinct.empty()) {
        throw DomainError("dataset has no rows");
    }
    const Pattern target = cfg.target.empty()
                               ? ds.rows().front().pattern
                               : pattern_from_fields(ds, in.table.header, split(cfg.target, ','), in.label_col);
    t.target_ones_one_hot = encode(target, one_hot).count_ones();
    t.target_ones_label = encode(target, label).count_ones();
    s.r = distinct.size();
    const auto n_o = static_cast<double>(one_hot.total_bits());
    s.gamma = static_cast<double>(t.database_ones_one_hot) / (n_o * static_cast<double>(s.r));
    s.delta = static_cast<double>(t.target_ones_one_hot) / n_o;
    s.tallies = t;
    return s;
}

void cmd_estimate(const RunConfig& cfg, json& result, std::ostream& text) {
    if (cfg.omega_grid) {
        text << "a,delta,omega\n";
        json rows = json::array();
        for (std::size_t a = 3; a <= 64; ++a) {
            for (int k = 0; k < 20; ++k) {
                const double delta = k / 20.0;
                const double w = omega(delta, a);
                text << a << ',' << fmt12(delta) << ',' << fmt12(w) << '\n';
                rows.push_back({{"a", a}, {"delta", sig12(delta)}, {"omega", sig12(w)}});
            }
        }
        result["omega_grid"] = rows;
        return;
    }
    InstanceStats stats;
    if (!cfg.data.empty()) {
        stats = stats_from_data(cfg);
    } else {
        if (!cfg.z || !cfg.a) {
            throw DomainError("estimate needs --data or both --z and --a");
        }
        stats = InstanceStats::uniform(*cfg.z, *cfg.a, cfg.r, cfg.gamma, cfg.delta);
    }
    const ResourceReport rep = full_report(stats);

    result["z"] = stats.z();
    result["alphabet_sizes"] = stats.alphabet_sizes;
    result["r"] = stats.r;
    result["gamma"] = sig12(stats.gamma);
    result["delta"] = sig12(stats.delta);
    result["n_one_hot"] = rep.n_one_hot;
    result["n_label"] = rep.n_label;
    result["qubits"] = {{"ppqm", rep.ppqm_qubits},
                        {"eppqm", rep.eppqm_qubits},
                        {"savings_percent", rep.savings_percent},
                        {"encoding_advantage", rep.encoding_advantage}};
    result["omega"] = omega_json(rep.omega);
    json variants = json::array();
    for (const auto& v : rep.variants) {
        variants.push_back({{"algorithm", to_string(v.algorithm)},
                            {"variant", to_string(v.variant)},
                            {"storage", to_string(v.method.storage)},
                            {"retrieval", to_string(v.method.retrieval)},
                            {"n", v.n},
                            {"qubits_theory", v.qubits_theory},
                            {"qubits_implementation", v.qubits_implementation},
                            {"storage_gates", tally_json(v.storage)},
                            {"retrieval_gates", tally_json(v.retrieval)},
                            {"measurements", v.measurements}});
    }
    result["variants"] = variants;

    if (cfg.format == "csv") {
        text << "algorithm,variant,n,qubits_theory,qubits_implementation,storage_gates,retrieval_gates,"
                "measurements\n";
        for (const auto& v : rep.variants) {
            text << to_string(v.algorithm) << ',' << to_string(v.variant) << ',' << v.n << ',' << v.qubits_theory
                 << ',' << v.qubits_implementation << ',' << total(v.storage) << ',' << total(v.retrieval) << ','
                 << v.measurements << '\n';
        }
    } else {
        text << "qubits: P-PQM " << rep.ppqm_qubits << ", EP-PQM " << rep.eppqm_qubits << ", savings "
             << rep.savings_percent << "%\n";
        if (!rep.encoding_advantage) {
            text << "no encoding advantage\n";
        }
        for (const auto& v : rep.variants) {
            text << to_string(v.algorithm) << ' ' << to_string(v.variant) << ": n=" << v.n
                 << " qubits=" << v.qubits_theory << '/' << v.qubits_implementation << " storage=";
            for (const auto& [k, c] : v.storage) {
                text << ' ' << to_string(k) << ':' << c;
            }
            text << " retrieval=";
            for (const auto& [k, c] : v.retrieval) {
                text << ' ' << to_string(k) << ':' << c;
            }
            text << " measure:" << v.measurements << '\n';
        }
        if (rep.omega) {
            text << "omega: " << (std::isinf(*rep.omega) ? "unbounded" : fmt12(*rep.omega)) << '\n';
        }
    }
}

// ---------------------------------------------------------- simulate

void cmd_simulate(const RunConfig& cfg, json& result, std::ostream& text) {
    const ProgramSpec spec = program_spec(cfg);
    const bool features = is_feature_level(spec.retrieval);
    json dbs = json::array();
    if (cfg.format == "csv") {
        text << "label,r,qubits,depth,p_accept,closed_form_p_accept\n";
    }
    for (const auto& inst : instances(cfg)) {
        const Circuit c = build_checked(cfg, inst);
        const QuantumState state = execute(c, std::nullopt, cfg.max_qubits);
        const double p = accept_probability(c, state);
        const auto dist = accepted_pattern_distribution(c, state);
        const auto d = distances(inst, features);
        const auto closed = retrieval_distribution(d, features ? inst.widths.size() : inst.target.size(), cfg.nu);
        const std::size_t dep = depth(c);

        json entry;
        entry["label"] = inst.label;
        entry["r"] = inst.patterns.size();
        entry["qubits"] = c.layout.num_qubits;
        entry["depth"] = dep;
        entry["p_accept"] = sig12(p);
        entry["closed_form_p_accept"] = sig12(closed.p_accept);
        json per = json::array();
        for (std::size_t k = 0; k < inst.patterns.size(); ++k) {
            per.push_back({{"pattern", inst.patterns[k].to_string()},
                           {"distance", d[k]},
                           {"probability", dist.empty() ? 0.0 : sig12(dist[k])}});
        }
        entry["per_pattern"] = per;
        entry["histogram"] = hist_json(histogram(c));
        if (cfg.histogram) {
            const std::size_t n = inst.target.size();
            std::uint64_t db_ones = 0;
            for (const auto& pat : inst.patterns) {
                db_ones += pat.count_ones();
            }
            const GateTally t = merged(storage_gate_counts(spec.storage, n, inst.patterns.size(), db_ones),
                                       retrieval_gate_counts(spec.retrieval, inst.widths, inst.target.count_ones()));
            entry["estimate_histogram"] = hist_json(to_histogram(t, cfg.measure ? measure_count(n) : 0));
        }
        dbs.push_back(entry);

        if (cfg.format == "csv") {
            text << inst.label << ',' << inst.patterns.size() << ',' << c.layout.num_qubits << ',' << dep << ','
                 << fmt12(p) << ',' << fmt12(closed.p_accept) << '\n';
        } else {
            text << inst.label << ": p_accept=" << fmt12(p) << " (closed form " << fmt12(closed.p_accept)
                 << "), qubits=" << c.layout.num_qubits << ", depth=" << dep << '\n';
            for (std::size_t k = 0; k < inst.patterns.size(); ++k) {
                text << "  " << inst.patterns[k].to_string() << " d=" << d[k]
                     << " p=" << fmt12(dist.empty() ? 0.0 : dist[k]) << '\n';
            }
        }
    }
    result["databases"] = dbs;
}

// ---------------------------------------------------------- classify

void cmd_classify(const RunConfig& cfg, json& result, std::ostream& text) {
    if (cfg.data.empty()) {
        throw DomainError("classify needs --data");
    }
    if (cfg.target.empty()) {
        throw DomainError("--target is required");
    }
    const Loaded in = load(cfg);
    const auto scheme = EncodingScheme::for_alphabets(encoding_kind(cfg), in.dataset.alphabets());
    const DatabaseBuild build = build_databases(in.dataset, scheme);
    const Pattern target = pattern_from_fields(in.dataset, in.table.header, split(cfg.target, ','), in.label_col);

    ClassifierConfig cc;
    const ProgramSpec spec = program_spec(cfg);
    cc.method = {spec.storage, spec.retrieval};
    cc.nu = cfg.nu;
    cc.convention = spec.convention;
    cc.options = spec.options;
    cc.max_qubits = cfg.max_qubits;
    cc.mode = cfg.mode == "sampled" ? SamplingMode::sampled(cfg.shots, cfg.seed) : SamplingMode::exact();
    const AffinityResult res = classify(build.databases, target, cc);

    json per = json::array();
    for (const auto& a : res.per_label) {
        json e{{"label", a.label}, {"rho", sig12(a.rho)}, {"p_accept", sig12(a.p_accept)}, {"r", a.r},
               {"qubits", a.qubits}};
        if (cc.mode.kind == SamplingMode::Kind::Sampled) {
            e["accepted"] = a.accepted;
            e["shots"] = a.shots;
        }
        per.push_back(e);
    }
    result["per_label"] = per;
    result["label"] = res.label;
    result["tie"] = res.tie;
    result["warnings"] = build.warnings;

    if (cfg.format == "csv") {
        text << "label,rho,p_accept,chosen\n";
        for (std::size_t i = 0; i < res.per_label.size(); ++i) {
            const auto& a = res.per_label[i];
            text << a.label << ',' << fmt12(a.rho) << ',' << fmt12(a.p_accept) << ','
                 << (i == res.chosen ? 1 : 0) << '\n';
        }
    } else {
        for (const auto& a : res.per_label) {
            text << a.label << ": rho=" << fmt12(a.rho) << '\n';
        }
        text << "label: " << res.label << (res.tie ? " (tie)" : "") << '\n';
    }
}

// ------------------------------------------------------------ export

std::string cmd_export(const RunConfig& cfg) {
    auto all = instances(cfg);
    const Instance* chosen = &all.front();
    if (!cfg.label.empty()) {
        chosen = nullptr;
        for (const auto& inst : all) {
            if (inst.label == cfg.label) {
                chosen = &inst;
            }
        }
        if (!chosen) {
            throw DomainError("no database for label '" + cfg.label + "'");
        }
    }
    return to_qasm(build_checked(cfg, *chosen));
}

int env_cap() {
    if (const char* v = std::getenv("PQM_MAX_QUBITS")) {
        try {
            return std::stoi(v);
        } catch (const std::exception&) {
            throw DomainError(std::string("PQM_MAX_QUBITS is not an integer: ") + v);
        }
    }
    return kDefaultMaxQubits;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.nu > 0.0 && cfg.nu <= 1.0)) {
        throw DomainError("--nu must lie in (0, 1]");
    }
    if (cfg.shots == 0) {
        throw DomainError("--shots must be at least 1");
    }
    if (cfg.max_qubits < 1) {
        throw DomainError("--max-qubits must be positive");
    }
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["data"] = c.data;
    j["label_col"] = c.label_col;
    j["encoding"] = c.encoding;
    j["algo"] = c.algo;
    j["variant"] = c.variant;
    j["layout"] = c.layout;
    j["nu"] = c.nu;
    j["mode"] = c.mode;
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["max_qubits"] = c.max_qubits;
    j["format"] = c.format;
    j["out"] = c.out;
    j["patterns"] = c.patterns;
    j["widths"] = c.widths;
    j["target"] = c.target;
    j["z"] = c.z ? json(*c.z) : json(nullptr);
    j["a"] = c.a ? json(*c.a) : json(nullptr);
    j["r"] = c.r;
    j["gamma"] = c.gamma;
    j["delta"] = c.delta;
    j["histogram"] = c.histogram;
    j["measure"] = c.measure;
    j["literal_nisq_phase"] = c.literal_nisq_phase;
    j["omega_grid"] = c.omega_grid;
    j["label"] = c.label;
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic quantum memory simulator and resource estimator", "pqmsim"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&cfg](CLI::App* sub) {
        sub->add_option("--data", cfg.data, "CSV dataset (header row, one label column)");
        sub->add_option("--label-col", cfg.label_col, "label column name (default: last column)");
        sub->add_option("--encoding", cfg.encoding, "onehot | label (default: per algorithm)")
            ->check(CLI::IsMember({"onehot", "label"}));
        sub->add_option("--algo", cfg.algo, "pqm | ppqm | eppqm")
            ->check(CLI::IsMember({"pqm", "ppqm", "eppqm"}))
            ->capture_default_str();
        sub->add_option("--variant", cfg.variant, "ft | nisq")
            ->check(CLI::IsMember({"ft", "nisq"}))
            ->capture_default_str();
        sub->add_option("--layout", cfg.layout, "theory | implementation qubit convention")
            ->check(CLI::IsMember({"theory", "implementation"}))
            ->capture_default_str();
        sub->add_option("--nu", cfg.nu, "retrieval scale parameter in (0, 1]")->capture_default_str();
        sub->add_option("--mode", cfg.mode, "exact | sampled")
            ->check(CLI::IsMember({"exact", "sampled"}))
            ->capture_default_str();
        sub->add_option("--shots", cfg.shots, "shots per database in sampled mode")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
        sub->add_option("--max-qubits", cfg.max_qubits, "qubit budget (env PQM_MAX_QUBITS)");
        sub->add_option("--format", cfg.format, "json | csv | plain")
            ->check(CLI::IsMember({"json", "csv", "plain"}))
            ->capture_default_str();
        sub->add_option("--out", cfg.out, "write output to this file");
        sub->add_option("--patterns", cfg.patterns, "comma-separated stored bit strings");
        sub->add_option("--widths", cfg.widths, "comma-separated feature widths of the bit strings");
        sub->add_option("--target", cfg.target, "target bit string, or feature values with --data");
        sub->add_flag("--measure", cfg.measure, "append terminal measurements");
        sub->add_flag("--literal-nisq-phase", cfg.literal_nisq_phase,
                      "omit the control-phase correction of NISQ retrieval for nu != 1");
    };

    auto* estimate = app.add_subcommand("estimate", "closed-form qubit and gate counts");
    auto* simulate = app.add_subcommand("simulate", "statevector storage + retrieval");
    auto* classify_cmd = app.add_subcommand("classify", "per-label affinity and chosen label");
    auto* export_cmd = app.add_subcommand("export", "OpenQASM 3 text of the storage + retrieval circuit");
    for (auto* sub : {estimate, simulate, classify_cmd, export_cmd}) {
        common(sub);
    }
    estimate->add_option("--z", cfg.z, "number of features");
    estimate->add_option("--a", cfg.a, "alphabet size per feature");
    estimate->add_option("--r", cfg.r, "stored patterns")->capture_default_str();
    estimate->add_option("--gamma", cfg.gamma, "fraction of 1-bits in the database")->capture_default_str();
    estimate->add_option("--delta", cfg.delta, "fraction of 1-bits in the target")->capture_default_str();
    estimate->add_flag("--omega-grid", cfg.omega_grid, "emit omega over a = 3..64, delta = 0..0.95 as CSV");
    simulate->add_flag("--histogram", cfg.histogram, "add the closed-form gate histogram");
    export_cmd->add_option("--label", cfg.label, "label database to export (default: first)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        cfg.max_qubits = env_cap();
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        validate(cfg);
        std::ostringstream text;
        std::string payload;
        if (cfg.command == "export") {
            payload = cmd_export(cfg);
        } else {
            json result = json::object();
            if (cfg.command == "estimate") {
                cmd_estimate(cfg, result, text);
            } else if (cfg.command == "simulate") {
                cmd_simulate(cfg, result, text);
            } else {
                cmd_classify(cfg, result, text);
            }
            if (cfg.format == "json" && !(cfg.omega_grid && cfg.command == "estimate")) {
                json doc;
                doc["schema_version"] = kSchemaVersion;
                doc["command"] = cfg.command;
                doc["config"] = to_json(cfg);
                doc["result"] = result;
                payload = doc.dump(2) + "\n";
            } else {
                payload = text.str();
            }
        }
        if (cfg.out.empty()) {
            out << payload;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f || !(f << payload)) {
                err << "error: cannot write " << cfg.out << '\n';
                return kExitIo;
            }
        }
        return 0;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

}  // namespace pqm::cli
