#include "revsem/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "revsem/errors.hpp"
#include "revsem/mock_server.hpp"
#include "revsem/sentiment.hpp"
#include "revsem/srr.hpp"

namespace revsem {

namespace fs = std::filesystem;

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pipeline config: " + path);
    nlohmann::json json;
    try {
        in >> json;
    } catch (const std::exception& e) {
        throw ConfigError("pipeline config is not valid JSON: " + std::string(e.what()));
    }
    auto require = [&](const char* key) {
        if (!json.contains(key))
            throw ConfigError(std::string("pipeline config missing key: ") + key);
        return json.at(key);
    };

    PipelineConfig config;
    config.input_csv = require("input").get<std::string>();
    config.players_file = require("players").get<std::string>();
    config.output_dir = require("output_dir").get<std::string>();
    if (json.contains("lexicon")) config.lexicon_file = json["lexicon"].get<std::string>();
    if (json.contains("sectors")) config.sector_file = json["sectors"].get<std::string>();
    if (json.contains("seed")) config.seed = json["seed"].get<unsigned>();
    if (json.contains("case_insensitive"))
        config.case_insensitive_models = json["case_insensitive"].get<bool>();
    for (const auto& m : require("models")) {
        PipelineModelSpec spec;
        spec.name = m.at("name").get<std::string>();
        spec.file = m.at("file").get<std::string>();
        std::string mode = m.value("mode", "explicit");
        if (mode == "explicit") spec.mode = LoweringMode::explicit_only;
        else if (mode == "auto") spec.mode = LoweringMode::auto_complete;
        else throw ConfigError("model '" + spec.name + "': unknown mode '" + mode + "'");
        config.models.push_back(std::move(spec));
    }
    if (json.contains("sampling")) {
        SamplingDesign design;
        const auto& s = json["sampling"];
        if (s.contains("quota"))
            for (auto it = s["quota"].begin(); it != s["quota"].end(); ++it)
                design.quota_by_score[std::stoi(it.key())] = it.value().get<std::size_t>();
        else
            design = SamplingDesign::paper_default();
        if (s.contains("seed")) design.seed = s["seed"].get<unsigned>();
        if (s.contains("take_all_on_deficit"))
            design.take_all_on_deficit = s["take_all_on_deficit"].get<bool>();
        config.sampling = design;
    }
    if (json.contains("toxicity")) {
        const auto& t = json["toxicity"];
        if (t.contains("url")) config.toxicity_url = t["url"].get<std::string>();
        if (t.contains("qps")) config.toxicity_qps = t["qps"].get<double>();
        if (t.contains("api_key")) config.api_key = t["api_key"].get<std::string>();
    }
    return config;
}

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const Error& e) {
    throw Error(e.error_class(), "stage '" + stage + "' failed: " + std::string(e.what()) +
                                     " (fix the issue and rerun; completed toxicity rows "
                                     "resume from the checkpoint)");
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

struct PlayerFile {
    std::map<std::string, double> srr;  // appId -> serviceRelativeRating
};

PlayerFile load_players(const std::string& path, const SectorTable& sectors) {
    CsvTable table = read_csv_file(path);
    std::size_t app_col = table.require_column("appId");
    std::size_t rating_col = table.require_column("rating");
    std::size_t count_col = table.require_column("reviewerCount");

    std::map<int, std::vector<PlayerRating>> by_sector;
    for (const auto& row : table.rows) {
        PlayerRating player;
        player.appId = row[app_col];
        player.overall_rating = std::stod(row[rating_col]);
        player.reviewer_count = std::stol(row[count_col]);
        by_sector[sectors.code(player.appId).value].push_back(player);
    }
    PlayerFile out;
    for (const auto& [sector, players] : by_sector)
        for (const auto& [app, value] : compute_srr(players)) out.srr[app] = value;
    return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log) {
    PipelineResult result;
    fs::create_directories(config.output_dir);
    auto out_path = [&](const std::string& name) {
        return (fs::path(config.output_dir) / name).string();
    };
    auto note = [&](const std::string& msg) {
        if (log) *log << msg << "\n";
    };

    // --- ingest ---
    std::vector<ReviewRecord> records;
    try {
        records = parse_reviews(read_csv_file(config.input_csv));
        result.input_rows = records.size();
        if (config.sampling) records = balance_sample(records, *config.sampling);
        result.sampled_rows = records.size();
    } catch (const Error& e) {
        stage_fail("ingest", e);
    }
    note("ingest: " + std::to_string(result.input_rows) + " rows read, " +
         std::to_string(records.size()) + " after sampling");

    SectorTable sectors = config.sector_file ? SectorTable::from_file(*config.sector_file)
                                             : SectorTable::bundled_default();

    // --- sentiment ---
    std::vector<double> sentiments;
    try {
        Lexicon lexicon = config.lexicon_file ? Lexicon::from_file(*config.lexicon_file)
                                              : Lexicon::bundled_default();
        sentiments.reserve(records.size());
        for (const auto& rec : records)
            sentiments.push_back(score_review(rec.content, lexicon).average);
        CsvTable with_sentiment = serialize_reviews(records);
        with_sentiment.header.push_back("commentSentiment");
        for (std::size_t i = 0; i < records.size(); ++i)
            with_sentiment.rows[i].push_back(format_double(sentiments[i]));
        write_csv_file(out_path("reviews_with_sentimentscore.csv"), with_sentiment);
    } catch (const Error& e) {
        stage_fail("sentiment", e);
    }
    note("sentiment: scored " + std::to_string(records.size()) + " reviews");

    // --- toxicity ---
    std::vector<ToxicityScore> toxicity;
    try {
        MockToxicityServer mock;
        std::string url;
        std::string key;
        if (config.toxicity_url) {
            url = *config.toxicity_url;
            key = config.api_key ? *config.api_key : Credentials::from_env().api_key;
        } else {
            mock.start();
            url = mock.base_url();
            key = config.api_key.value_or("mock-key");
        }
        RateLimitPolicy policy;
        policy.max_requests_per_second = config.toxicity_qps;
        ToxicityClient client(url, Credentials{key}, policy);
        StreamOptions options;
        options.checkpoint_path = out_path("toxicity.checkpoint");
        options.progress = log;
        toxicity = stream_scores(records, client, options);

        CsvTable with_toxicity = serialize_reviews(records);
        with_toxicity.header.push_back("commentToxicity");
        for (std::size_t i = 0; i < records.size(); ++i)
            with_toxicity.rows[i].push_back(
                toxicity[i].is_missing() ? "NA" : format_double(*toxicity[i].value));
        write_csv_file(out_path("reviews_with_toxicityscore.csv"), with_toxicity);
    } catch (const Error& e) {
        stage_fail("toxicity", e);
    }
    note("toxicity: scored " + std::to_string(records.size()) + " reviews");

    // --- SRR join + sector coding ---
    std::vector<EnrichedRecord> enriched;
    try {
        PlayerFile players = load_players(config.players_file, sectors);
        CsvTable srr_csv;
        srr_csv.header = {"appId", "srr"};
        for (const auto& [app, value] : players.srr)
            srr_csv.rows.push_back({app, format_double(value)});
        write_csv_file(out_path("srr.csv"), srr_csv);

        for (std::size_t i = 0; i < records.size(); ++i) {
            EnrichedRecord rec;
            rec.review = records[i];
            rec.commentSentiment = sentiments[i];
            rec.commentToxicity = toxicity[i];
            rec.serviceCluster = sectors.code(records[i].appId);
            auto it = players.srr.find(records[i].appId);
            if (it == players.srr.end())
                throw DataError("no serviceRelativeRating for appId " + records[i].appId);
            rec.serviceRelativeRating = it->second;
            enriched.push_back(std::move(rec));
        }
    } catch (const Error& e) {
        stage_fail("srr-join", e);
    }

    // --- listwise cleaning ---
    CleanResult clean;
    try {
        clean = clean_listwise(enriched);
        result.clean_report = clean.report;
        std::ofstream report(out_path("clean_report.txt"));
        report << clean.report.human_text() << "\n" << clean.report.machine_text();
        CsvTable analysis;
        analysis.header = AnalysisRow::variable_names();
        for (const auto& row : clean.rows) {
            std::vector<std::string> fields;
            for (std::size_t j = 0; j < 6; ++j) fields.push_back(format_double(row.field(j)));
            analysis.rows.push_back(std::move(fields));
        }
        write_csv_file(out_path("reviews_with_sentox_sectorwise.csv"), analysis);
    } catch (const Error& e) {
        stage_fail("clean", e);
    }
    note("clean: " + std::to_string(clean.report.kept) + " kept, " +
         std::to_string(clean.report.dropped) + " dropped");

    // --- model fits ---
    try {
        SampleMoments moments = sample_moments(clean.rows);
        for (const auto& spec : config.models) {
            std::ifstream model_in(spec.file);
            if (!model_in) throw ConfigError("cannot open model file: " + spec.file);
            std::stringstream buffer;
            buffer << model_in.rdbuf();
            FitRun run = run_fit(buffer.str(), moments, spec.mode, FitOptions{},
                                 config.case_insensitive_models);
            std::ofstream human(out_path("fit_" + spec.name + ".txt"));
            human << render_summary(run);
            std::ofstream machine(out_path("fit_" + spec.name + ".kv"));
            machine << render_machine(run);
            std::ofstream edges(out_path("fit_" + spec.name + ".edges"));
            edges << render_edge_list(run);
            note("fit " + spec.name + ": chisq " + format3(run.indices.chisq) + ", df " +
                 std::to_string(run.df));
            result.fits.emplace_back(spec.name, std::move(run));
        }
    } catch (const Error& e) {
        stage_fail("fit", e);
    }
    return result;
}

}  // namespace revsem
