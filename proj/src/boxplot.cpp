#include "revsem/boxplot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

double quantile_linear(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("quantile of empty set");
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::vector<GroupStats> boxplot_stats(const CsvTable& table, const std::string& value_column,
                                      const std::vector<std::string>& group_by) {
    std::size_t value_col = table.require_column(value_column);
    std::vector<std::size_t> group_cols;
    for (const auto& g : group_by) group_cols.push_back(table.require_column(g));

    std::map<std::vector<std::string>, std::vector<double>> groups;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        double value;
        try {
            value = std::stod(row[value_col]);
        } catch (const std::exception&) {
            throw DataError("row " + std::to_string(r + 1) + ": non-numeric value '" +
                            row[value_col] + "' in column " + value_column);
        }
        std::vector<std::string> key;
        for (std::size_t c : group_cols) key.push_back(row[c]);
        groups[key].push_back(value);
    }
    if (groups.empty()) throw DataError("boxplot-stats: no rows to summarize");

    std::vector<GroupStats> out;
    for (const auto& [key, values] : groups) {
        GroupStats stats;
        stats.group = key;
        stats.count = values.size();
        stats.min = *std::min_element(values.begin(), values.end());
        stats.max = *std::max_element(values.begin(), values.end());
        stats.q1 = quantile_linear(values, 0.25);
        stats.median = quantile_linear(values, 0.5);
        stats.q3 = quantile_linear(values, 0.75);
        double total = 0.0;
        for (double v : values) total += v;
        stats.mean = total / static_cast<double>(values.size());
        out.push_back(std::move(stats));
    }
    return out;
}

CsvTable boxplot_to_csv(const std::vector<GroupStats>& stats,
                        const std::vector<std::string>& group_by) {
    CsvTable out;
    out.header = group_by;
    for (const char* col : {"min", "q1", "median", "q3", "max", "mean", "count"})
        out.header.emplace_back(col);
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        return s.str();
    };
    for (const auto& g : stats) {
        std::vector<std::string> row = g.group;
        row.push_back(num(g.min));
        row.push_back(num(g.q1));
        row.push_back(num(g.median));
        row.push_back(num(g.q3));
        row.push_back(num(g.max));
        row.push_back(num(g.mean));
        row.push_back(std::to_string(g.count));
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace revsem
