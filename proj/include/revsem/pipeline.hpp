#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revsem/ingest.hpp"
#include "revsem/summary.hpp"
#include "revsem/toxicity.hpp"

namespace revsem {

struct PipelineModelSpec {
    std::string name;
    std::string file;
    LoweringMode mode = LoweringMode::explicit_only;
};

struct PipelineConfig {
    std::string input_csv;
    std::optional<std::string> lexicon_file;  // bundled default when unset
    std::optional<std::string> sector_file;
    std::string players_file;  // appId,sector,rating,reviewerCount
    std::vector<PipelineModelSpec> models;
    std::string output_dir;
    unsigned seed = 0;
    std::optional<SamplingDesign> sampling;
    bool case_insensitive_models = false;

    // toxicity stage
    std::optional<std::string> toxicity_url;  // unset -> in-process mock
    double toxicity_qps = 50.0;
    std::optional<std::string> api_key;  // else PERSPECTIVE_API_KEY / mock key

    static PipelineConfig from_file(const std::string& path);
};

struct PipelineResult {
    CleanReport clean_report;
    std::size_t input_rows = 0;
    std::size_t sampled_rows = 0;
    std::vector<std::pair<std::string, FitRun>> fits;
};

/// Full flow: parse -> (sample) -> sentiment -> toxicity -> sector + SRR
/// join -> listwise clean -> fit every configured model. Writes the
/// intermediate CSV artifacts and fit summaries into output_dir. A stage
/// failure is rethrown with the stage name prefixed.
PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

}  // namespace revsem
