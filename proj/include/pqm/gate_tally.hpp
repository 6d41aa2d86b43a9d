#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "pqm/statevector.hpp"

namespace pqm {

/// Gate kind plus control arity; MCX with one control is a CNOT.
struct GateKey {
    GateKind kind;
    std::size_t controls = 0;

    friend auto operator<=>(const GateKey&, const GateKey&) = default;
};

using GateTally = std::map<GateKey, std::uint64_t>;

std::string to_string(const GateKey& key);

/// Adds `count` to `tally[key]`, skipping zero counts so that tallies compare
/// equal regardless of how they were assembled.
inline void add_count(GateTally& tally, GateKey key, std::uint64_t count) {
    if (count != 0) {
        tally[key] += count;
    }
}

inline GateTally merged(GateTally a, const GateTally& b) {
    for (const auto& [k, v] : b) {
        add_count(a, k, v);
    }
    return a;
}

inline std::uint64_t total(const GateTally& t) {
    std::uint64_t s = 0;
    for (const auto& [k, v] : t) {
        s += v;
    }
    return s;
}

}  // namespace pqm
