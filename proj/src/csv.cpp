#include "revsem/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

std::optional<std::size_t> CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
    if (auto idx = column_index(name)) return *idx;
    throw DataError("missing mandatory column: " + name);
}

namespace {

// Parses one record starting at the stream position; handles quoted fields
// spanning newlines. Returns false at EOF with nothing read.
bool read_record(std::istream& in, char delim, std::vector<std::string>& out) {
    out.clear();
    int c = in.get();
    if (c == EOF) return false;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (true) {
        if (c == EOF) {
            out.push_back(field);
            return true;
        }
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                int next = in.peek();
                if (next == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == delim) {
            out.push_back(field);
            field.clear();
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            out.push_back(field);
            return true;
        } else if (ch == '\n') {
            out.push_back(field);
            return true;
        } else {
            field.push_back(ch);
        }
        c = in.get();
    }
    (void)any;
}

}  // namespace

CsvTable read_csv(std::istream& in, char delimiter) {
    CsvTable table;
    std::vector<std::string> record;
    if (!read_record(in, delimiter, record)) return table;
    // Strip a UTF-8 BOM if present.
    if (!record.empty() && record[0].rfind("\xEF\xBB\xBF", 0) == 0)
        record[0].erase(0, 3);
    table.header = record;
    while (read_record(in, delimiter, record)) {
        if (record.size() == 1 && record[0].empty()) continue;  // blank line
        if (record.size() != table.header.size()) {
            std::ostringstream msg;
            msg << "row " << table.rows.size() + 1 << " has " << record.size()
                << " fields, header has " << table.header.size();
            throw DataError(msg.str());
        }
        table.rows.push_back(record);
    }
    return table;
}

CsvTable read_csv_file(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    return read_csv(in, delimiter);
}

std::string csv_quote(const std::string& field, char delimiter) {
    bool needs = field.find_first_of(std::string("\"\r\n") + delimiter) != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_csv(std::ostream& out, const CsvTable& table, char delimiter) {
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << delimiter;
            out << csv_quote(row[i], delimiter);
        }
        out << "\n";
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
}

void write_csv_file(const std::string& path, const CsvTable& table, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    write_csv(out, table, delimiter);
}

}  // namespace revsem
