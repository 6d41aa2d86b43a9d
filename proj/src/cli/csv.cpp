#include "pqm/csv.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>
#include <sstream>

#include "pqm/errors.hpp"

namespace pqm {

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> record_lines;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool after_quote = false;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t record_line = 1;
    std::size_t quote_line = 0;
    std::size_t quote_column = 0;

    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        after_quote = false;
    };
    auto end_record = [&] {
        const bool quoted = field_was_quoted;
        end_field();
        // A line holding nothing at all is skipped, not read as one empty field.
        if (quoted || !(record.size() == 1 && record.front().empty())) {
            records.push_back(std::move(record));
            record_lines.push_back(record_line);
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                    column += 2;
                    continue;
                }
                in_quotes = false;
                after_quote = true;
            } else {
                field.push_back(ch);
                if (ch == '\n') {
                    ++line;
                    column = 0;
                }
            }
            ++column;
            continue;
        }
        switch (ch) {
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    break;
                }
                [[fallthrough]];
            case '\n':
                end_record();
                ++line;
                column = 0;
                record_line = line;
                break;
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw ParseError("unexpected quote inside an unquoted field", line, column);
                }
                in_quotes = true;
                field_was_quoted = true;
                quote_line = line;
                quote_column = column;
                break;
            default:
                if (after_quote) {
                    throw ParseError("text after closing quote", line, column);
                }
                field.push_back(ch);
        }
        ++column;
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field", quote_line, quote_column);
    }
    if (!field.empty() || field_was_quoted || !record.empty()) {
        end_record();
    }

    if (records.empty()) {
        throw ParseError("empty file: a header row is required", 1, 1);
    }
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t k = 1; k < records.size(); ++k) {
        if (records[k].size() != table.header.size()) {
            const std::size_t col = std::min(records[k].size(), table.header.size()) + 1;
            throw ParseError("expected " + std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(records[k].size()),
                             record_lines[k], col);
        }
        table.rows.push_back(std::move(records[k]));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::filesystem::filesystem_error("cannot open", path,
                                                std::make_error_code(std::errc::no_such_file_or_directory));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

namespace {

void write_field(std::string& out, const std::string& f) {
    const bool quote = f.empty() || f.find_first_of(",\"\r\n") != std::string::npos || f.front() == ' ' ||
                       f.back() == ' ';
    if (!quote) {
        out += f;
        return;
    }
    out.push_back('"');
    for (char ch : f) {
        if (ch == '"') {
            out.push_back('"');
        }
        out.push_back(ch);
    }
    out.push_back('"');
}

void write_record(std::string& out, const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (i) {
            out.push_back(',');
        }
        write_field(out, rec[i]);
    }
    out.push_back('\n');
}

}  // namespace

std::string serialize_csv(const CsvTable& table) {
    std::string out;
    write_record(out, table.header);
    for (const auto& row : table.rows) {
        write_record(out, row);
    }
    return out;
}

namespace {

std::size_t label_index(const std::vector<std::string>& header, std::string_view label_column) {
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) {
        throw ParseError("label column '" + std::string(label_column) + "' not in header", 1, 0);
    }
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

LabeledDataset dataset_from_csv(const CsvTable& table, std::string_view label_column) {
    const std::size_t li = label_index(table.header, label_column);
    if (table.header.size() < 2) {
        throw ParseError("need at least one feature column besides the label", 1, 1);
    }
    std::vector<std::string> names;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k != li) {
            names.push_back(table.header[k]);
        }
    }
    std::vector<Alphabet> alphabets(names.size());
    std::vector<Pattern> patterns;
    for (const auto& row : table.rows) {
        Pattern p;
        std::size_t f = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k != li) {
                p.features.push_back(alphabets[f++].intern(row[k]));
            }
        }
        patterns.push_back(std::move(p));
    }
    LabeledDataset ds(std::move(names), std::move(alphabets));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        ds.add(std::move(patterns[i]), table.rows[i][li]);
    }
    return ds;
}

CsvTable dataset_to_csv(const LabeledDataset& dataset, std::string_view label_column) {
    CsvTable t;
    t.header = dataset.feature_names();
    t.header.emplace_back(label_column);
    for (const auto& row : dataset.rows()) {
        std::vector<std::string> rec;
        for (std::size_t j = 0; j < row.pattern.size(); ++j) {
            rec.push_back(dataset.alphabets()[j].symbol(row.pattern.features[j]));
        }
        rec.push_back(row.label);
        t.rows.push_back(std::move(rec));
    }
    return t;
}

Pattern pattern_from_fields(const LabeledDataset& dataset, const std::vector<std::string>& header,
                            const std::vector<std::string>& fields, std::string_view label_column) {
    std::vector<std::string> symbols;
    if (fields.size() == dataset.num_features()) {
        symbols = fields;
    } else if (fields.size() == header.size()) {
        const std::size_t li = label_index(header, label_column);
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k != li) {
                symbols.push_back(fields[k]);
            }
        }
    } else {
        throw DomainError("target has " + std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(dataset.num_features()) + " features");
    }
    return make_pattern(symbols, dataset.alphabets());
}

}  // namespace pqm
