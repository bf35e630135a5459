#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revsem {

enum class SortOrder { relevant, newest };

std::string to_string(SortOrder order);
SortOrder sort_order_from_string(const std::string& text);

/// One scraped app review. Columns beyond the ones modelled here are kept
/// verbatim in `extras` so serialization round-trips.
struct ReviewRecord {
    std::string reviewId;
    std::string content;
    int score = 0;  // 1..5
    long thumbsUpCount = 0;
    std::string appId;
    SortOrder sortOrder = SortOrder::relevant;
    std::vector<std::pair<std::string, std::string>> extras;
};

enum class MissingReason { api_error, unsupported_language, empty_text, timeout };

std::string to_string(MissingReason reason);

/// Probability in [0,1] that readers would judge the text toxic, or a
/// missing marker carrying the failure class.
struct ToxicityScore {
    std::optional<double> value;
    MissingReason reason = MissingReason::api_error;

    static ToxicityScore present(double v) { return ToxicityScore{v, MissingReason::api_error}; }
    static ToxicityScore missing(MissingReason r) { return ToxicityScore{std::nullopt, r}; }
    bool is_missing() const { return !value.has_value(); }
};

/// Ordinal psychological-distance sector code: 1 service, 2 pharma, 3 travel.
struct SectorCode {
    int value = 0;
    bool valid() const { return value >= 1 && value <= 3; }
};

struct EnrichedRecord {
    ReviewRecord review;
    double commentSentiment = 0.0;
    ToxicityScore commentToxicity;
    SectorCode serviceCluster;
    double serviceRelativeRating = 0.0;
};

/// The six observed model variables, post listwise cleaning.
struct AnalysisRow {
    double reviewerScore = 0.0;
    double thumbsUpCount = 0.0;
    double serviceCluster = 0.0;
    double commentSentiment = 0.0;
    double commentToxicity = 0.0;
    double serviceRelativeRating = 0.0;

    double field(std::size_t i) const;
    static const std::vector<std::string>& variable_names();
};

}  // namespace revsem
