#pragma once

// Independent reference computations and random instance generators for tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "pqm/core_model.hpp"

namespace pqm::testing {

/// (1/r) sum_k cos^2(pi d_k / (2 den nu)), evaluated directly.
inline double accept_oracle(const std::vector<std::size_t>& d, std::size_t den, double nu) {
    double s = 0.0;
    for (std::size_t dk : d) {
        const double c = std::cos(std::numbers::pi * static_cast<double>(dk) / (2.0 * static_cast<double>(den) * nu));
        s += c * c;
    }
    return s / static_cast<double>(d.size());
}

inline std::size_t bit_distance(const BitPattern& x, const BitPattern& y) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += x.bits()[i] != y.bits()[i] ? 1 : 0;
    }
    return d;
}

/// Number of feature blocks in which x and y differ anywhere.
inline std::size_t block_distance(const BitPattern& x, const BitPattern& y, const std::vector<std::size_t>& widths) {
    std::size_t d = 0;
    std::size_t off = 0;
    for (std::size_t w : widths) {
        bool differ = false;
        for (std::size_t k = off; k < off + w; ++k) {
            differ = differ || x.bits()[k] != y.bits()[k];
        }
        d += differ ? 1 : 0;
        off += w;
    }
    return d;
}

/// Index of a pattern in the memory register (bit j of the pattern on the
/// j-th memory qubit).
inline std::uint64_t memory_code(const BitPattern& p) {
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        c |= static_cast<std::uint64_t>(p.bits()[j]) << j;
    }
    return c;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin() { return index(0, 1) == 1; }

    BitPattern bits(std::size_t n, std::vector<std::size_t> widths = {}) {
        std::vector<std::uint8_t> b(n);
        for (auto& v : b) {
            v = static_cast<std::uint8_t>(index(0, 1));
        }
        return BitPattern(std::move(b), std::move(widths));
    }

    /// r distinct patterns of n bits (r is clamped to 2^n).
    std::vector<BitPattern> database(std::size_t r, std::size_t n, const std::vector<std::size_t>& widths = {}) {
        r = std::min<std::size_t>(r, std::size_t{1} << n);
        std::set<BitPattern> seen;
        std::vector<BitPattern> out;
        while (out.size() < r) {
            BitPattern p = bits(n, widths);
            if (seen.insert(p).second) {
                out.push_back(std::move(p));
            }
        }
        return out;
    }

    /// Random positive widths summing to n with exactly z blocks.
    std::vector<std::size_t> widths(std::size_t n, std::size_t z) {
        std::vector<std::size_t> w(z, 1);
        for (std::size_t extra = n - z; extra > 0; --extra) {
            ++w[index(0, z - 1)];
        }
        return w;
    }

    Pattern pattern(std::size_t z, std::size_t a) {
        Pattern p;
        for (std::size_t j = 0; j < z; ++j) {
            p.features.push_back(index(0, a - 1));
        }
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace pqm::testing
