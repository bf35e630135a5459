#pragma once

#include <string>
#include <vector>

#include "revsem/csv.hpp"

namespace revsem {

struct GroupStats {
    std::vector<std::string> group;  // one value per group-by column
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
    std::size_t count = 0;
};

/// Quartiles use linear interpolation between order statistics
/// (the common "type 7" rule: position (n-1)*q, fractional part
/// interpolated).
double quantile_linear(std::vector<double> values, double q);

std::vector<GroupStats> boxplot_stats(const CsvTable& table, const std::string& value_column,
                                      const std::vector<std::string>& group_by);

CsvTable boxplot_to_csv(const std::vector<GroupStats>& stats,
                        const std::vector<std::string>& group_by);

}  // namespace revsem
