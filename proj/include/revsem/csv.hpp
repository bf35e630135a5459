#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace revsem {

/// In-memory delimited table. Quoting follows RFC 4180: fields containing the
/// delimiter, a quote, or a newline are quoted; embedded quotes are doubled.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column_index(const std::string& name) const;
    /// Index of `name`, or throws DataError naming the missing column.
    std::size_t require_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, char delimiter = ',');
CsvTable read_csv_file(const std::string& path, char delimiter = ',');

void write_csv(std::ostream& out, const CsvTable& table, char delimiter = ',');
void write_csv_file(const std::string& path, const CsvTable& table, char delimiter = ',');

std::string csv_quote(const std::string& field, char delimiter = ',');

}  // namespace revsem
