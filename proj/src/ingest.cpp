#include "revsem/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "revsem/errors.hpp"

namespace revsem {

std::string to_string(SortOrder order) {
    return order == SortOrder::relevant ? "relevant" : "newest";
}

SortOrder sort_order_from_string(const std::string& text) {
    if (text == "relevant" || text == "most_relevant" || text == "MOST_RELEVANT")
        return SortOrder::relevant;
    if (text == "newest" || text == "NEWEST") return SortOrder::newest;
    throw DataError("unknown sortOrder value: " + text);
}

std::string to_string(MissingReason reason) {
    switch (reason) {
        case MissingReason::api_error: return "api_error";
        case MissingReason::unsupported_language: return "unsupported_language";
        case MissingReason::empty_text: return "empty_text";
        case MissingReason::timeout: return "timeout";
    }
    return "api_error";
}

double AnalysisRow::field(std::size_t i) const {
    switch (i) {
        case 0: return reviewerScore;
        case 1: return thumbsUpCount;
        case 2: return serviceCluster;
        case 3: return commentSentiment;
        case 4: return commentToxicity;
        case 5: return serviceRelativeRating;
    }
    throw std::out_of_range("AnalysisRow::field");
}

const std::vector<std::string>& AnalysisRow::variable_names() {
    static const std::vector<std::string> names = {
        "reviewerScore",     "thumbsUpCount",   "serviceCluster",
        "commentSentiment",  "commentToxicity", "serviceRelativeRating"};
    return names;
}

SamplingDesign SamplingDesign::paper_default() {
    SamplingDesign d;
    d.quota_by_score = {{1, 100}, {2, 100}, {3, 200}, {4, 100}, {5, 100}};
    return d;
}

std::string CleanReport::human_text() const {
    std::ostringstream out;
    out << "Listwise cleaning: kept " << kept << ", dropped " << dropped << "\n";
    for (const auto& [reason, n] : dropped_by_reason)
        out << "  dropped (" << reason << "): " << n << "\n";
    return out.str();
}

std::string CleanReport::machine_text() const {
    std::ostringstream out;
    out << "kept=" << kept << "\n" << "dropped=" << dropped << "\n";
    for (const auto& [reason, n] : dropped_by_reason)
        out << "dropped." << reason << "=" << n << "\n";
    return out.str();
}

namespace {

long parse_long(const std::string& text, const char* what, std::size_t row) {
    try {
        std::size_t pos = 0;
        long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "row " << row << ": cannot parse " << what << " value '" << text << "'";
        throw DataError(msg.str());
    }
}

}  // namespace

std::vector<ReviewRecord> parse_reviews(const CsvTable& table) {
    std::size_t content_col = table.require_column("content");
    std::size_t score_col = table.require_column("score");
    std::size_t thumbs_col = table.require_column("thumbsUpCount");
    std::size_t app_col = table.require_column("appId");
    auto id_col = table.column_index("reviewId");
    auto sort_col = table.column_index("sortOrder");

    std::vector<bool> modelled(table.header.size(), false);
    modelled[content_col] = modelled[score_col] = modelled[thumbs_col] = modelled[app_col] = true;
    if (id_col) modelled[*id_col] = true;
    if (sort_col) modelled[*sort_col] = true;

    std::vector<ReviewRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ReviewRecord rec;
        rec.content = row[content_col];
        rec.score = static_cast<int>(parse_long(row[score_col], "score", r + 1));
        if (rec.score < 1 || rec.score > 5) {
            std::ostringstream msg;
            msg << "row " << r + 1 << ": score " << rec.score << " outside 1..5";
            throw DataError(msg.str());
        }
        rec.thumbsUpCount = parse_long(row[thumbs_col], "thumbsUpCount", r + 1);
        if (rec.thumbsUpCount < 0) {
            std::ostringstream msg;
            msg << "row " << r + 1 << ": negative thumbsUpCount";
            throw DataError(msg.str());
        }
        rec.appId = row[app_col];
        if (rec.appId.empty()) {
            std::ostringstream msg;
            msg << "row " << r + 1 << ": empty appId";
            throw DataError(msg.str());
        }
        if (id_col) rec.reviewId = row[*id_col];
        if (sort_col && !row[*sort_col].empty())
            rec.sortOrder = sort_order_from_string(row[*sort_col]);
        for (std::size_t c = 0; c < row.size(); ++c)
            if (!modelled[c]) rec.extras.emplace_back(table.header[c], row[c]);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ReviewRecord> parse_reviews(std::istream& csv_source) {
    return parse_reviews(read_csv(csv_source));
}

CsvTable serialize_reviews(const std::vector<ReviewRecord>& records) {
    CsvTable table;
    table.header = {"reviewId", "content", "score", "thumbsUpCount", "appId", "sortOrder"};
    if (!records.empty())
        for (const auto& [k, v] : records.front().extras) table.header.push_back(k);
    for (const auto& rec : records) {
        std::vector<std::string> row = {rec.reviewId,
                                        rec.content,
                                        std::to_string(rec.score),
                                        std::to_string(rec.thumbsUpCount),
                                        rec.appId,
                                        to_string(rec.sortOrder)};
        for (const auto& [k, v] : rec.extras) row.push_back(v);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<ReviewRecord> balance_sample(const std::vector<ReviewRecord>& records,
                                         const SamplingDesign& design) {
    // Cell = (appId, sortOrder, score). Selection is first-k in input order
    // unless a seed requests random sampling.
    using CellKey = std::tuple<std::string, SortOrder, int>;
    std::map<CellKey, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        cells[{r.appId, r.sortOrder, r.score}].push_back(i);
    }

    // App ids in first-appearance order so output stays replayable.
    std::vector<std::string> apps;
    for (const auto& r : records)
        if (std::find(apps.begin(), apps.end(), r.appId) == apps.end()) apps.push_back(r.appId);

    std::vector<std::string> deficits;
    std::vector<std::size_t> chosen;
    std::mt19937 rng(design.seed.value_or(0));
    for (const auto& app : apps) {
        for (SortOrder order : {SortOrder::relevant, SortOrder::newest}) {
            for (const auto& [score, quota] : design.quota_by_score) {
                if (quota == 0) continue;
                auto it = cells.find({app, order, score});
                std::vector<std::size_t> avail = it == cells.end() ? std::vector<std::size_t>{}
                                                                   : it->second;
                if (avail.size() < quota && !design.take_all_on_deficit) {
                    std::ostringstream cell;
                    cell << "(" << app << ", " << to_string(order) << ", score " << score
                         << "): have " << avail.size() << ", need " << quota;
                    deficits.push_back(cell.str());
                    continue;
                }
                std::size_t take = std::min<std::size_t>(quota, avail.size());
                if (design.seed && avail.size() > take) {
                    std::shuffle(avail.begin(), avail.end(), rng);
                    avail.resize(take);
                    std::sort(avail.begin(), avail.end());
                } else {
                    avail.resize(take);
                }
                chosen.insert(chosen.end(), avail.begin(), avail.end());
            }
        }
    }
    if (!deficits.empty()) {
        std::ostringstream msg;
        msg << "insufficient rows for " << deficits.size() << " sampling cell(s):";
        for (const auto& d : deficits) msg << "\n  " << d;
        throw DataError(msg.str());
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<ReviewRecord> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(records[i]);
    return out;
}

SectorTable SectorTable::from_stream(std::istream& in) {
    SectorTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t sep = line.find_first_of(",\t");
        if (sep == std::string::npos)
            throw DataError("sector table line missing delimiter: " + line);
        std::string app = line.substr(0, sep);
        std::string sector = line.substr(sep + 1);
        int code;
        if (sector == "service") code = 1;
        else if (sector == "pharma") code = 2;
        else if (sector == "travel") code = 3;
        else throw DataError("unknown sector '" + sector + "' for app " + app);
        table.entries_[app] = SectorCode{code};
    }
    return table;
}

SectorTable SectorTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sector table: " + path);
    return from_stream(in);
}

SectorTable SectorTable::bundled_default() {
    static const char* kTable =
        "AmazonIndia,service\nBigBasket,service\nWhiteHatJr,service\nUdemy,service\n"
        "Zomato,service\nGroww,service\n"
        "Netmeds,pharma\nmedlife,pharma\nsastasundar,pharma\npracto,pharma\n"
        "apollo,pharma\n1mg,pharma\n"
        "makemytrip,travel\noyo rooms,travel\ngoibibo,travel\nredbus,travel\n"
        "Uber,travel\nbooking,travel\n";
    std::istringstream in(kTable);
    return from_stream(in);
}

SectorCode SectorTable::code(const std::string& appId) const {
    auto it = entries_.find(appId);
    if (it == entries_.end()) throw DataError("unknown appId in sector lookup: " + appId);
    return it->second;
}

SectorCode code_sector(const std::string& appId, const SectorTable& lookup) {
    return lookup.code(appId);
}

CleanResult clean_listwise(const std::vector<EnrichedRecord>& records) {
    CleanResult result;
    for (const auto& rec : records) {
        if (rec.commentToxicity.is_missing()) {
            ++result.report.dropped;
            ++result.report.dropped_by_reason[to_string(rec.commentToxicity.reason)];
            continue;
        }
        if (!rec.serviceCluster.valid() || !std::isfinite(rec.commentSentiment) ||
            !std::isfinite(rec.serviceRelativeRating) || rec.serviceRelativeRating <= 0) {
            ++result.report.dropped;
            ++result.report.dropped_by_reason["invalid_model_variable"];
            continue;
        }
        AnalysisRow row;
        row.reviewerScore = rec.review.score;
        row.thumbsUpCount = static_cast<double>(rec.review.thumbsUpCount);
        row.serviceCluster = rec.serviceCluster.value;
        row.commentSentiment = rec.commentSentiment;
        row.commentToxicity = *rec.commentToxicity.value;
        row.serviceRelativeRating = rec.serviceRelativeRating;
        result.rows.push_back(row);
        ++result.report.kept;
    }
    return result;
}

}  // namespace revsem
