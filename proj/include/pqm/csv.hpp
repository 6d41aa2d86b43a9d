#pragma once

// UTF-8 CSV tables (quoted fields, "" escapes, LF or CRLF line ends) and their
// conversion to labeled categorical datasets.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pqm/core_model.hpp"

namespace pqm {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// Throws ParseError with a 1-based line and column for unterminated quotes,
/// stray quotes and rows whose field count differs from the header.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);
std::string serialize_csv(const CsvTable& table);

/// Every column except `label_column` is a categorical feature; alphabets are
/// inferred in first-appearance order.
LabeledDataset dataset_from_csv(const CsvTable& table, std::string_view label_column);
/// Features in order followed by the label column.
CsvTable dataset_to_csv(const LabeledDataset& dataset, std::string_view label_column);

/// Looks a row of feature values (label column optional) up in the dataset's
/// alphabets; unknown symbols raise DomainError.
Pattern pattern_from_fields(const LabeledDataset& dataset, const std::vector<std::string>& header,
                            const std::vector<std::string>& fields, std::string_view label_column);

}  // namespace pqm
