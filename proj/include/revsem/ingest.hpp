#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revsem/csv.hpp"
#include "revsem/records.hpp"

namespace revsem {

/// Per-(appId, sortOrder) quota: how many rows to keep of each score.
struct SamplingDesign {
    std::map<int, std::size_t> quota_by_score;
    std::optional<unsigned> seed;  // random sampling when set, else first-k
    bool take_all_on_deficit = false;

    /// 200 of score 3 and 100 each of 1, 2, 4, 5 per app and sort order.
    static SamplingDesign paper_default();
};

struct CleanReport {
    std::size_t kept = 0;
    std::size_t dropped = 0;
    std::map<std::string, std::size_t> dropped_by_reason;

    std::string human_text() const;
    std::string machine_text() const;  // key=value lines
};

std::vector<ReviewRecord> parse_reviews(std::istream& csv_source);
std::vector<ReviewRecord> parse_reviews(const CsvTable& table);
CsvTable serialize_reviews(const std::vector<ReviewRecord>& records);

std::vector<ReviewRecord> balance_sample(const std::vector<ReviewRecord>& records,
                                         const SamplingDesign& design);

/// appId -> sector mapping loaded from a two-column delimited file
/// (appId, sector name in {service, pharma, travel}).
class SectorTable {
public:
    static SectorTable from_stream(std::istream& in);
    static SectorTable from_file(const std::string& path);
    static SectorTable bundled_default();

    SectorCode code(const std::string& appId) const;
    const std::map<std::string, SectorCode>& entries() const { return entries_; }

private:
    std::map<std::string, SectorCode> entries_;
};

SectorCode code_sector(const std::string& appId, const SectorTable& lookup);

struct CleanResult {
    std::vector<AnalysisRow> rows;
    CleanReport report;
};

CleanResult clean_listwise(const std::vector<EnrichedRecord>& records);

}  // namespace revsem
