#include "pqm/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "pqm/errors.hpp"

namespace pqm {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) {
    for (auto& s : symbols) {
        if (index_.contains(s)) {
            throw DomainError("duplicate alphabet symbol '" + s + "'");
        }
        index_.emplace(s, symbols_.size());
        symbols_.push_back(std::move(s));
    }
}

std::size_t Alphabet::intern(std::string_view symbol) {
    if (auto found = find(symbol)) {
        return *found;
    }
    index_.emplace(std::string(symbol), symbols_.size());
    symbols_.emplace_back(symbol);
    return symbols_.size() - 1;
}

std::optional<std::size_t> Alphabet::find(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
    if (auto found = find(symbol)) {
        return *found;
    }
    throw DomainError("symbol '" + std::string(symbol) + "' is not in the alphabet");
}

const std::string& Alphabet::symbol(std::size_t index) const {
    if (index >= symbols_.size()) {
        throw DomainError("symbol index " + std::to_string(index) + " out of range");
    }
    return symbols_[index];
}

Pattern make_pattern(std::span<const std::string> symbols, std::span<const Alphabet> alphabets) {
    if (symbols.size() != alphabets.size()) {
        throw DomainError("pattern has " + std::to_string(symbols.size()) + " features, expected " +
                          std::to_string(alphabets.size()));
    }
    Pattern p;
    p.features.reserve(symbols.size());
    for (std::size_t j = 0; j < symbols.size(); ++j) {
        p.features.push_back(alphabets[j].index_of(symbols[j]));
    }
    return p;
}

Pattern make_pattern(std::string_view chars, const Alphabet& alphabet, std::size_t z) {
    std::string compact;
    for (char ch : chars) {
        if (ch != ' ') {
            compact.push_back(ch);
        }
    }
    if (compact.size() != z) {
        throw DomainError("pattern '" + std::string(chars) + "' does not have " + std::to_string(z) +
                          " features");
    }
    Pattern p;
    for (char ch : compact) {
        p.features.push_back(alphabet.index_of(std::string_view(&ch, 1)));
    }
    return p;
}

// ---------------------------------------------------------- LabeledDataset

LabeledDataset::LabeledDataset(std::vector<std::string> feature_names, std::vector<Alphabet> alphabets)
    : feature_names_(std::move(feature_names)), alphabets_(std::move(alphabets)) {
    if (feature_names_.size() != alphabets_.size()) {
        throw DomainError("feature name count does not match alphabet count");
    }
}

void LabeledDataset::add(Pattern pattern, std::string label) {
    if (pattern.size() != alphabets_.size()) {
        throw DomainError("row has " + std::to_string(pattern.size()) + " features, dataset has " +
                          std::to_string(alphabets_.size()));
    }
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (pattern.features[j] >= alphabets_[j].size()) {
            throw DomainError("feature " + std::to_string(j) + " index out of range");
        }
    }
    if (std::find(labels_.begin(), labels_.end(), label) == labels_.end()) {
        labels_.push_back(label);
    }
    rows_.push_back({std::move(pattern), std::move(label)});
}

// ---------------------------------------------------------------- Encoding

std::string_view to_string(EncodingKind kind) {
    return kind == EncodingKind::OneHot ? "onehot" : "label";
}

EncodingKind parse_encoding_kind(std::string_view text) {
    if (text == "onehot" || text == "one-hot" || text == "one_hot") {
        return EncodingKind::OneHot;
    }
    if (text == "label") {
        return EncodingKind::Label;
    }
    throw DomainError("unknown encoding '" + std::string(text) + "'");
}

std::size_t one_hot_width(std::size_t alphabet_size) {
    if (alphabet_size == 0) {
        throw DomainError("alphabet must contain at least one symbol");
    }
    return alphabet_size > 2 ? alphabet_size : 1;
}

std::size_t label_width(std::size_t alphabet_size) {
    if (alphabet_size == 0) {
        throw DomainError("alphabet must contain at least one symbol");
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < alphabet_size) {
        ++bits;
    }
    return std::max<std::size_t>(bits, 1);
}

EncodingScheme::EncodingScheme(EncodingKind kind, std::vector<std::size_t> sizes,
                               std::vector<std::vector<std::uint32_t>> codes)
    : kind_(kind), sizes_(std::move(sizes)), codes_(std::move(codes)) {
    if (sizes_.empty()) {
        throw DomainError("an encoding needs at least one feature");
    }
    for (std::size_t a : sizes_) {
        std::size_t w = kind_ == EncodingKind::OneHot ? one_hot_width(a) : label_width(a);
        offsets_.push_back(total_bits_);
        widths_.push_back(w);
        total_bits_ += w;
    }
}

EncodingScheme EncodingScheme::one_hot(std::span<const std::size_t> alphabet_sizes) {
    return {EncodingKind::OneHot, {alphabet_sizes.begin(), alphabet_sizes.end()}, {}};
}

EncodingScheme EncodingScheme::label(std::span<const std::size_t> alphabet_sizes) {
    return {EncodingKind::Label, {alphabet_sizes.begin(), alphabet_sizes.end()}, {}};
}

EncodingScheme EncodingScheme::label_with_codes(std::span<const std::size_t> alphabet_sizes,
                                                std::vector<std::vector<std::uint32_t>> codes) {
    if (codes.size() != alphabet_sizes.size()) {
        throw DomainError("one code table per feature is required");
    }
    for (std::size_t j = 0; j < codes.size(); ++j) {
        const std::size_t width = label_width(alphabet_sizes[j]);
        if (codes[j].size() != alphabet_sizes[j]) {
            throw DomainError("code table " + std::to_string(j) + " must cover every symbol");
        }
        std::set<std::uint32_t> seen;
        for (std::uint32_t c : codes[j]) {
            if (c >= (std::uint32_t{1} << width) || !seen.insert(c).second) {
                throw DomainError("code table " + std::to_string(j) + " is not a bijection into " +
                                  std::to_string(width) + " bits");
            }
        }
    }
    return {EncodingKind::Label, {alphabet_sizes.begin(), alphabet_sizes.end()}, std::move(codes)};
}

EncodingScheme EncodingScheme::for_alphabets(EncodingKind kind, std::span<const Alphabet> alphabets) {
    std::vector<std::size_t> sizes;
    for (const auto& a : alphabets) {
        sizes.push_back(a.size());
    }
    return {kind, std::move(sizes), {}};
}

EncodingScheme EncodingScheme::uniform(EncodingKind kind, std::size_t z, std::size_t a) {
    return {kind, std::vector<std::size_t>(z, a), {}};
}

std::uint32_t EncodingScheme::label_code(std::size_t feature, std::size_t symbol) const {
    if (symbol >= sizes_.at(feature)) {
        throw DomainError("symbol index " + std::to_string(symbol) + " out of range for feature " +
                          std::to_string(feature));
    }
    if (!codes_.empty()) {
        return codes_[feature][symbol];
    }
    return static_cast<std::uint32_t>(symbol);
}

// -------------------------------------------------------------- BitPattern

BitPattern::BitPattern(std::vector<std::uint8_t> bits, std::vector<std::size_t> widths)
    : bits_(std::move(bits)), widths_(std::move(widths)) {
    for (auto& b : bits_) {
        if (b > 1) {
            throw DomainError("bit values must be 0 or 1");
        }
    }
    if (widths_.empty()) {
        widths_.push_back(bits_.size());
    }
}

BitPattern BitPattern::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        } else if (ch != ' ') {
            throw DomainError("invalid bit character '" + std::string(1, ch) + "'");
        }
    }
    return BitPattern(std::move(bits));
}

std::size_t BitPattern::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string BitPattern::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

BitPattern encode(const Pattern& pattern, const EncodingScheme& scheme) {
    if (pattern.size() != scheme.num_features()) {
        throw DomainError("pattern has " + std::to_string(pattern.size()) + " features, encoding expects " +
                          std::to_string(scheme.num_features()));
    }
    std::vector<std::uint8_t> bits(scheme.total_bits(), 0);
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        const std::size_t symbol = pattern.features[j];
        const std::size_t a = scheme.alphabet_sizes()[j];
        if (symbol >= a) {
            throw DomainError("feature " + std::to_string(j) + " symbol index " + std::to_string(symbol) +
                              " out of range (alphabet size " + std::to_string(a) + ")");
        }
        const std::size_t width = scheme.widths()[j];
        const std::size_t offset = scheme.offset(j);
        if (scheme.kind() == EncodingKind::OneHot && width > 1) {
            bits[offset + symbol] = 1;
        } else {
            // Big-endian: the block's first bit is the code's most significant bit.
            const std::uint32_t code = scheme.kind() == EncodingKind::Label
                                           ? scheme.label_code(j, symbol)
                                           : static_cast<std::uint32_t>(symbol);
            for (std::size_t b = 0; b < width; ++b) {
                bits[offset + b] = static_cast<std::uint8_t>((code >> (width - 1 - b)) & 1u);
            }
        }
    }
    return BitPattern(std::move(bits), scheme.widths());
}

std::size_t hamming_bits(const BitPattern& x, const BitPattern& y) {
    if (x.size() != y.size()) {
        throw DomainError("bit patterns have different lengths (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += x[i] != y[i];
    }
    return d;
}

std::size_t hamming_features(const Pattern& x, const Pattern& y) {
    if (x.size() != y.size()) {
        throw DomainError("patterns have different feature counts");
    }
    std::size_t d = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        d += x.features[j] != y.features[j];
    }
    return d;
}

double bit_fraction(std::span<const BitPattern> bits) {
    std::size_t ones = 0;
    std::size_t total = 0;
    for (const auto& b : bits) {
        ones += b.count_ones();
        total += b.size();
    }
    if (total == 0) {
        throw DomainError("bit_fraction of an empty input");
    }
    return static_cast<double>(ones) / static_cast<double>(total);
}

double bit_fraction(const BitPattern& bits) {
    return bit_fraction(std::span<const BitPattern>(&bits, 1));
}

// --------------------------------------------------------------- Retrieval

RetrievalDistribution retrieval_distribution(std::span<const std::size_t> distances,
                                             std::size_t denominator, double nu) {
    if (distances.empty()) {
        throw DomainError("retrieval over an empty database");
    }
    if (denominator == 0) {
        throw DomainError("denominator must be positive");
    }
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw DomainError("nu must lie in (0, 1]");
    }
    const double r = static_cast<double>(distances.size());
    std::vector<double> weights;
    weights.reserve(distances.size());
    double sum = 0.0;
    for (std::size_t d : distances) {
        if (d > denominator) {
            throw DomainError("distance " + std::to_string(d) + " exceeds denominator " +
                              std::to_string(denominator));
        }
        const double angle = std::numbers::pi * static_cast<double>(d) /
                             (2.0 * static_cast<double>(denominator) * nu);
        double w = std::cos(angle);
        w *= w;
        // cos(pi/2) is ~6e-17 in double precision; treat that as the exact zero it is.
        if (w < 1e-30) {
            w = 0.0;
        }
        weights.push_back(w);
        sum += w;
    }
    RetrievalDistribution out;
    out.p_accept = sum / r;
    if (sum > 0.0) {
        for (auto& w : weights) {
            w /= sum;
        }
        out.per_pattern = std::move(weights);
    }
    return out;
}

}  // namespace pqm
