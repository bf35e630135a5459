// revsem: review enrichment + covariance structure modeling CLI.

#include <CLI11.hpp>

#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "revsem/boxplot.hpp"
#include "revsem/csv.hpp"
#include "revsem/errors.hpp"
#include "revsem/ingest.hpp"
#include "revsem/mock_server.hpp"
#include "revsem/pipeline.hpp"
#include "revsem/sentiment.hpp"
#include "revsem/simulate.hpp"
#include "revsem/srr.hpp"
#include "revsem/summary.hpp"
#include "revsem/toxicity.hpp"

namespace {

using namespace revsem;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << text;
}

bool parse_number(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    auto [ptr, ec] = std::from_chars(b, e, out);
    while (ptr < e && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    return ec == std::errc() && ptr == e && b < e;
}

/// All columns whose every cell parses as a number, as a matrix.
struct NumericData {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
};

NumericData numeric_columns(const CsvTable& table) {
    NumericData out;
    if (table.rows.empty()) throw DataError("data file has no rows");
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        std::vector<double> col;
        col.reserve(table.rows.size());
        bool numeric = true;
        for (const auto& row : table.rows) {
            double v = 0.0;
            if (c >= row.size() || !parse_number(row[c], v)) {
                numeric = false;
                break;
            }
            col.push_back(v);
        }
        if (numeric) {
            out.names.push_back(table.header[c]);
            cols.push_back(std::move(col));
        }
    }
    if (out.names.empty()) throw DataError("data file has no numeric columns");
    out.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < cols[c].size(); ++r)
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
    return out;
}

/// Variables named in the model that are not loading targets of a latent.
std::vector<std::string> model_observed(const ModelAst& ast) {
    std::set<std::string> latents;
    for (const auto& st : ast.statements)
        if (st.kind == StatementKind::loading) latents.insert(st.lhs);
    std::vector<std::string> observed;
    std::set<std::string> seen;
    auto add = [&](const std::string& name) {
        if (latents.count(name) || seen.count(name)) return;
        seen.insert(name);
        observed.push_back(name);
    };
    for (const auto& st : ast.statements) {
        if (st.kind == StatementKind::defined) continue;
        if (st.kind != StatementKind::loading) add(st.lhs);
        for (const auto& term : st.terms) add(term.variable);
    }
    return observed;
}

int cmd_enrich_sentiment(const std::string& in, const std::string& out,
                         const std::string& lexicon_path) {
    Lexicon lexicon =
        lexicon_path.empty() ? Lexicon::bundled_default() : Lexicon::from_file(lexicon_path);
    CsvTable table = read_csv_file(in);
    std::size_t content = table.require_column("content");
    table.header.push_back("commentSentiment");
    for (auto& row : table.rows) {
        const std::string& text = content < row.size() ? row[content] : std::string();
        row.push_back(format_double(score_review(text, lexicon).average));
    }
    write_csv_file(out, table);
    std::cout << "wrote " << table.rows.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_enrich_toxicity(const std::string& in, const std::string& out, const std::string& url,
                        double qps, const std::string& checkpoint, const std::string& api_key) {
    std::vector<ReviewRecord> records;
    {
        std::ifstream src(in, std::ios::binary);
        if (!src) throw DataError("cannot open file: " + in);
        records = parse_reviews(src);
    }
    Credentials creds = api_key.empty() ? Credentials::from_env() : Credentials{api_key};
    RateLimitPolicy policy;
    policy.max_requests_per_second = qps;
    ToxicityClient client(url, creds, policy);
    StreamOptions options;
    options.checkpoint_path = checkpoint;
    options.progress = &std::cerr;
    std::vector<ToxicityScore> scores = stream_scores(records, client, options);

    CsvTable table = serialize_reviews(records);
    table.header.push_back("commentToxicity");
    for (std::size_t i = 0; i < records.size(); ++i)
        table.rows[i].push_back(scores[i].is_missing() ? "NA" : format_double(*scores[i].value));
    write_csv_file(out, table);
    std::cout << "wrote " << table.rows.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_srr(const std::string& in, const std::string& out, bool boundary_high) {
    CsvTable table = read_csv_file(in);
    std::size_t app = table.require_column("appId");
    std::size_t sector = table.require_column("sector");
    std::size_t rating = table.require_column("rating");
    std::size_t count = table.require_column("reviewerCount");

    std::map<std::string, std::vector<PlayerRating>> by_sector;
    std::vector<std::string> order;  // input order of appIds, for stable output
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        PlayerRating p;
        p.appId = row[app];
        double rp = 0.0, rc = 0.0;
        if (!parse_number(row[rating], rp) || !parse_number(row[count], rc))
            throw DataError("non-numeric rating/reviewerCount at data row " +
                            std::to_string(r + 1));
        p.overall_rating = rp;
        p.reviewer_count = static_cast<long>(rc);
        by_sector[row[sector]].push_back(p);
        order.push_back(p.appId);
    }
    std::map<std::string, double> srr;
    for (const auto& [name, players] : by_sector) {
        auto part = compute_srr(players, boundary_high);
        srr.insert(part.begin(), part.end());
    }
    CsvTable result;
    result.header = {"appId", "srr"};
    for (const auto& appId : order)
        result.rows.push_back({appId, format_double(srr.at(appId))});
    write_csv_file(out, result);
    std::cout << "wrote " << result.rows.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_fit(const std::string& model_path, const std::string& data_path, const std::string& mode,
            const std::string& divisor, int bootstrap_b, unsigned seed, bool case_insensitive,
            const std::string& machine_out, const std::string& edges_out) {
    NumericData data = numeric_columns(read_csv_file(data_path));
    CovDivisor div = divisor == "n-1" ? CovDivisor::n_minus_1 : CovDivisor::n;
    SampleMoments moments = sample_moments(data.values, data.names, div);

    LoweringMode lmode =
        mode == "auto" ? LoweringMode::auto_complete : LoweringMode::explicit_only;
    FitRun run = run_fit(read_text_file(model_path), moments, lmode, {}, case_insensitive);
    std::cout << render_summary(run);

    if (bootstrap_b > 0) {
        std::vector<std::string> observed = run.ram.variables;
        observed.resize(static_cast<std::size_t>(run.ram.n_observed));
        BootstrapResult boot =
            bootstrap(data.values, data.names, run.ram, observed, bootstrap_b, seed, {}, div);
        std::cout << "\nBootstrap Standard Errors (B=" << bootstrap_b << ", seed=" << seed
                  << ", used=" << boot.replicates_used << ", failed=" << boot.replicates_failed
                  << "):\n";
        if (boot.note) std::cout << "  note: " << *boot.note << "\n";
        for (const auto& [name, se] : boot.se) {
            std::ostringstream line;
            line.setf(std::ios::fixed);
            line.precision(6);
            line << "  " << name << "  " << se << "\n";
            std::cout << line.str();
        }
    }

    if (!machine_out.empty()) write_text_file(machine_out, render_machine(run));
    if (!edges_out.empty()) write_text_file(edges_out, render_edge_list(run));
    return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& mode,
                 const std::vector<std::string>& assignments, long n, unsigned seed,
                 const std::string& out, bool case_insensitive) {
    if (n < 1) throw ConfigError("simulate: N must be >= 1");
    ModelAst ast = parse_model(read_text_file(model_path));
    std::vector<std::string> observed = model_observed(ast);
    LoweringMode lmode =
        mode == "auto" ? LoweringMode::auto_complete : LoweringMode::explicit_only;
    ParameterTable table = lower(ast, lmode, observed, case_insensitive);
    RamMatrices ram = build_ram(table, observed);

    std::map<std::string, double> theta_by_name;
    for (const auto& spec : assignments) {
        auto eq = spec.rfind('=');
        double v = 0.0;
        if (eq == std::string::npos || !parse_number(spec.substr(eq + 1), v))
            throw ConfigError("simulate: --set expects name=value, got '" + spec + "'");
        theta_by_name[spec.substr(0, eq)] = v;
    }
    Eigen::VectorXd theta(ram.n_free());
    std::vector<std::string> missing;
    for (int k = 0; k < ram.n_free(); ++k) {
        auto it = theta_by_name.find(ram.param_names[k]);
        if (it == theta_by_name.end()) {
            missing.push_back(ram.param_names[k]);
            continue;
        }
        theta[k] = it->second;
        theta_by_name.erase(it);
    }
    if (!missing.empty()) {
        std::string msg = "simulate: unassigned free parameters:";
        for (const auto& name : missing) msg += " '" + name + "'";
        throw ConfigError(msg);
    }
    if (!theta_by_name.empty())
        throw ConfigError("simulate: unknown parameter '" + theta_by_name.begin()->first + "'");

    Eigen::MatrixXd data = simulate_data(ram, theta, static_cast<std::size_t>(n), seed);
    CsvTable csv;
    for (int j = 0; j < ram.n_observed; ++j)
        csv.header.push_back(ram.variables[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < ram.n_observed; ++j) row.push_back(format_double(data(i, j)));
        csv.rows.push_back(std::move(row));
    }
    write_csv_file(out, csv);
    std::cout << "wrote " << csv.rows.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_boxplot_stats(const std::string& in, const std::string& value,
                      const std::vector<std::string>& by, const std::string& out) {
    CsvTable table = read_csv_file(in);
    CsvTable result = boxplot_to_csv(boxplot_stats(table, value, by), by);
    if (out.empty())
        write_csv(std::cout, result);
    else {
        write_csv_file(out, result);
        std::cout << "wrote " << result.rows.size() << " rows to " << out << "\n";
    }
    return 0;
}

int cmd_pipeline(const std::string& config_path) {
    PipelineConfig config = PipelineConfig::from_file(config_path);
    PipelineResult result = run_pipeline(config, &std::cerr);
    std::cout << "pipeline complete: " << result.input_rows << " input rows, "
              << result.sampled_rows << " sampled, " << result.clean_report.kept
              << " kept after cleaning, " << result.fits.size() << " models fitted\n";
    return 0;
}

int cmd_mock_server(int port_hint) {
    (void)port_hint;  // the server always picks a free port
    MockToxicityServer server;
    int port = server.start();
    std::cout << "mock toxicity server listening on " << server.base_url()
              << " (port " << port << "); Ctrl-C to stop\n"
              << std::flush;
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"review enrichment and structural equation modeling toolkit"};
    app.require_subcommand(1);

    // enrich sentiment|toxicity
    auto* enrich = app.add_subcommand("enrich", "append derived score columns");
    enrich->require_subcommand(1);

    std::string sin, sout, slex;
    auto* senti = enrich->add_subcommand("sentiment", "append commentSentiment");
    senti->add_option("--in", sin, "input reviews CSV")->required();
    senti->add_option("--out", sout, "output CSV")->required();
    senti->add_option("--lexicon", slex, "lexicon file (token, weight|shifter class)");

    std::string tin, tout, tmock, tcheckpoint, tkey;
    double tqps = 1.0;
    auto* toxi = enrich->add_subcommand("toxicity", "append commentToxicity");
    toxi->add_option("--in", tin, "input reviews CSV")->required();
    toxi->add_option("--out", tout, "output CSV")->required();
    toxi->add_option("--mock", tmock, "scoring service base URL")->required();
    toxi->add_option("--qps", tqps, "max requests per second");
    toxi->add_option("--checkpoint", tcheckpoint, "resumable checkpoint file");
    toxi->add_option("--api-key", tkey, "API key (default: PERSPECTIVE_API_KEY)");

    std::string rin, rout;
    bool rboundary = false;
    auto* srr = app.add_subcommand("srr", "sector-relative rating per player");
    srr->add_option("--in", rin, "players CSV (appId,sector,rating,reviewerCount)")->required();
    srr->add_option("--out", rout, "output CSV (appId,srr)")->required();
    srr->add_flag("--boundary-high", rboundary, "credit 2 at exactly one million reviewers");

    std::string fmodel, fdata, fmode = "explicit", fdivisor = "n", fmachine, fedges;
    int fboot = 0;
    unsigned fseed = 1;
    bool fcase = false;
    auto* fit = app.add_subcommand("fit", "fit a covariance structure model");
    fit->add_option("--model", fmodel, "model file")->required();
    fit->add_option("--data", fdata, "data CSV")->required();
    fit->add_option("--mode", fmode, "lowering mode")
        ->check(CLI::IsMember({"explicit", "auto"}));
    fit->add_option("--divisor", fdivisor, "covariance divisor")
        ->check(CLI::IsMember({"n", "n-1"}));
    fit->add_option("--bootstrap", fboot, "bootstrap replicates for SEs");
    fit->add_option("--seed", fseed, "bootstrap seed");
    fit->add_flag("--case-insensitive", fcase, "match variable names case-insensitively");
    fit->add_option("--machine", fmachine, "write machine-readable key=value output here");
    fit->add_option("--edges", fedges, "write fitted structure edge list here");

    std::string mmodel, mmode = "explicit", mout;
    std::vector<std::string> msets;
    long mn = 0;
    unsigned mseed = 1;
    bool mcase = false;
    auto* simulate = app.add_subcommand("simulate", "draw data from a model at fixed theta");
    simulate->add_option("--model", mmodel, "model file")->required();
    simulate->add_option("--mode", mmode, "lowering mode")
        ->check(CLI::IsMember({"explicit", "auto"}));
    simulate->add_option("--set", msets, "parameter assignment name=value (repeatable)");
    simulate->add_option("--n", mn, "rows to draw")->required();
    simulate->add_option("--seed", mseed, "RNG seed");
    simulate->add_option("--out", mout, "output CSV")->required();
    simulate->add_flag("--case-insensitive", mcase, "match variable names case-insensitively");

    std::string bin, bvalue, bout;
    std::vector<std::string> bby;
    auto* boxplot = app.add_subcommand("boxplot-stats", "per-group quartile table");
    boxplot->add_option("--in", bin, "input CSV")->required();
    boxplot->add_option("--value", bvalue, "numeric column to summarize")->required();
    boxplot->add_option("--by", bby, "grouping columns");
    boxplot->add_option("--out", bout, "output CSV (stdout when omitted)");

    std::string pconfig;
    auto* pipeline = app.add_subcommand("pipeline", "run the full enrichment + fitting flow");
    pipeline->add_option("--config", pconfig, "JSON config file")->required();

    int mport = 0;
    auto* mock = app.add_subcommand("mock-server", "run a local deterministic scoring service");
    mock->add_option("--port", mport, "ignored; a free port is always chosen");

    CLI11_PARSE(app, argc, argv);

    try {
        if (senti->parsed()) return cmd_enrich_sentiment(sin, sout, slex);
        if (toxi->parsed()) return cmd_enrich_toxicity(tin, tout, tmock, tqps, tcheckpoint, tkey);
        if (srr->parsed()) return cmd_srr(rin, rout, rboundary);
        if (fit->parsed())
            return cmd_fit(fmodel, fdata, fmode, fdivisor, fboot, fseed, fcase, fmachine, fedges);
        if (simulate->parsed())
            return cmd_simulate(mmodel, mmode, msets, mn, mseed, mout, mcase);
        if (boxplot->parsed()) return cmd_boxplot_stats(bin, bvalue, bby, bout);
        if (pipeline->parsed()) return cmd_pipeline(pconfig);
        if (mock->parsed()) return cmd_mock_server(mport);
    } catch (const revsem::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
