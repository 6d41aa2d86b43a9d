#pragma once

// Symbolic patterns, bit-level encodings, classical distances and the
// closed-form acceptance probability of Hamming-distance retrieval.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pqm {

/// Ordered set of distinct attribute values for one feature.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    /// Appends `symbol` if unseen and returns its index.
    std::size_t intern(std::string_view symbol);

    std::optional<std::size_t> find(std::string_view symbol) const;
    std::size_t index_of(std::string_view symbol) const;  // throws DomainError
    const std::string& symbol(std::size_t index) const;

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// A row of z feature values, each an index into that feature's alphabet.
struct Pattern {
    std::vector<std::size_t> features;

    std::size_t size() const noexcept { return features.size(); }
    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Builds a pattern by looking every symbol up in its feature's alphabet.
Pattern make_pattern(std::span<const std::string> symbols, std::span<const Alphabet> alphabets);
/// Convenience for single-character symbols, e.g. "AAB".
Pattern make_pattern(std::string_view chars, const Alphabet& alphabet, std::size_t z);

struct LabeledRow {
    Pattern pattern;
    std::string label;
};

/// Rows of categorical features with a class label; all rows share the
/// per-feature alphabets.
class LabeledDataset {
public:
    LabeledDataset(std::vector<std::string> feature_names, std::vector<Alphabet> alphabets);

    void add(Pattern pattern, std::string label);

    std::size_t num_features() const noexcept { return alphabets_.size(); }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<Alphabet>& alphabets() const noexcept { return alphabets_; }
    const std::vector<LabeledRow>& rows() const noexcept { return rows_; }
    /// Distinct labels in first-appearance order.
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    std::vector<std::string> feature_names_;
    std::vector<Alphabet> alphabets_;
    std::vector<LabeledRow> rows_;
    std::vector<std::string> labels_;
};

enum class EncodingKind { OneHot, Label };

std::string_view to_string(EncodingKind kind);
EncodingKind parse_encoding_kind(std::string_view text);

/// Per-feature bit widths for one encoding.
///
/// One-hot uses a_j bits when a_j > 2 and a single bit when a_j <= 2. Label
/// encoding uses ceil(log2 a_j) bits, at least one. A label scheme may carry an
/// explicit code table per feature; by default a symbol's code is the
/// big-endian binary of its alphabet index.
class EncodingScheme {
public:
    static EncodingScheme one_hot(std::span<const std::size_t> alphabet_sizes);
    static EncodingScheme label(std::span<const std::size_t> alphabet_sizes);
    static EncodingScheme label_with_codes(std::span<const std::size_t> alphabet_sizes,
                                           std::vector<std::vector<std::uint32_t>> codes);
    static EncodingScheme for_alphabets(EncodingKind kind, std::span<const Alphabet> alphabets);
    static EncodingScheme uniform(EncodingKind kind, std::size_t z, std::size_t a);

    EncodingKind kind() const noexcept { return kind_; }
    const std::vector<std::size_t>& alphabet_sizes() const noexcept { return sizes_; }
    const std::vector<std::size_t>& widths() const noexcept { return widths_; }
    std::size_t num_features() const noexcept { return widths_.size(); }
    std::size_t total_bits() const noexcept { return total_bits_; }
    /// Bit offset of feature j within an encoded pattern.
    std::size_t offset(std::size_t feature) const { return offsets_.at(feature); }
    std::uint32_t label_code(std::size_t feature, std::size_t symbol) const;

    friend bool operator==(const EncodingScheme& a, const EncodingScheme& b) {
        return a.kind_ == b.kind_ && a.sizes_ == b.sizes_ && a.codes_ == b.codes_;
    }

private:
    EncodingScheme(EncodingKind kind, std::vector<std::size_t> sizes,
                   std::vector<std::vector<std::uint32_t>> codes);

    EncodingKind kind_;
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> widths_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::uint32_t>> codes_;
    std::size_t total_bits_ = 0;
};

std::size_t one_hot_width(std::size_t alphabet_size);
std::size_t label_width(std::size_t alphabet_size);

/// Fixed-length bit string; bit 0 is the leftmost character of its text form.
class BitPattern {
public:
    BitPattern() = default;
    explicit BitPattern(std::vector<std::uint8_t> bits, std::vector<std::size_t> widths = {});
    static BitPattern from_string(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    /// Feature block widths of the encoding that produced the bits; a single
    /// block of size() when built from raw text.
    const std::vector<std::size_t>& widths() const noexcept { return widths_; }
    std::size_t count_ones() const noexcept;
    std::string to_string() const;

    friend bool operator==(const BitPattern& a, const BitPattern& b) { return a.bits_ == b.bits_; }
    friend auto operator<=>(const BitPattern& a, const BitPattern& b) { return a.bits_ <=> b.bits_; }

private:
    std::vector<std::uint8_t> bits_;
    std::vector<std::size_t> widths_;
};

BitPattern encode(const Pattern& pattern, const EncodingScheme& scheme);

std::size_t hamming_bits(const BitPattern& x, const BitPattern& y);
std::size_t hamming_features(const Pattern& x, const Pattern& y);

/// Fraction of 1-bits over all given patterns.
double bit_fraction(std::span<const BitPattern> bits);
double bit_fraction(const BitPattern& bits);

struct RetrievalDistribution {
    double p_accept = 0.0;
    /// Conditional probability of reading stored pattern k after acceptance;
    /// empty when p_accept == 0.
    std::optional<std::vector<double>> per_pattern;
};

/// Accept probability (1/r) sum cos^2(pi d_k / (2 denominator nu)) and the
/// per-pattern conditional distribution. The denominator is n for bit-level
/// retrieval and z for feature-level retrieval.
RetrievalDistribution retrieval_distribution(std::span<const std::size_t> distances,
                                             std::size_t denominator, double nu);

}  // namespace pqm
