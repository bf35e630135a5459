#include "revsem/summary.hpp"

#include <iomanip>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

FitRun run_fit(const std::string& model_text, const SampleMoments& moments,
               LoweringMode mode, const FitOptions& options, bool case_insensitive_vars) {
    FitRun run;
    run.ast = parse_model(model_text);
    run.table = lower(run.ast, mode, moments.names, case_insensitive_vars);
    run.df = count_df(run.table, static_cast<int>(run.table.observed.size()));
    run.ram = build_ram(run.table, run.table.observed);
    run.moments = moments.reordered(run.table.observed);
    run.estimate = optimize(run.ram, run.moments, options);
    standard_errors(run.estimate, run.ram, run.moments, options);
    delta_defined(run.estimate, run.ram);
    run.implied_sigma = implied_cov(run.ram, run.estimate.theta).sigma;
    BaselineFit baseline = fit_baseline(run.moments, options.multiplier_n_minus_1);
    run.indices = compute_fit_indices(run.estimate.fml_value, run.estimate.multiplier, run.df,
                                      baseline.chisq, baseline.df, run.moments.s,
                                      run.implied_sigma, run.moments.n,
                                      /*rmsea_n_minus_1=*/true);
    return run;
}

namespace {

std::string fixed6(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << v;
    std::string s = out.str();
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string full_precision(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void header_line(std::ostream& out, const std::string& label, const std::string& value) {
    int pad = 54 - static_cast<int>(label.size()) - static_cast<int>(value.size());
    out << "  " << label << std::string(std::max(pad, 1), ' ') << value << "\n";
}

struct ParamLine {
    std::string name;      // display name within its block
    double estimate = 0.0;
    bool free = false;
    double se = 0.0, z = 0.0, p = 1.0;
};

void param_block(std::ostream& out, const std::string& heading,
                 const std::vector<std::pair<std::string, std::vector<ParamLine>>>& groups) {
    bool any = false;
    for (const auto& g : groups)
        if (!g.second.empty()) any = true;
    if (!any) return;
    out << heading << "\n";
    out << "                     Estimate    Std.Err    z-value   P(>|z|)\n";
    for (const auto& [group, lines] : groups) {
        if (lines.empty()) continue;
        if (!group.empty()) out << "  " << group << "\n";
        for (const auto& line : lines) {
            out << "    " << std::left << std::setw(14) << line.name << std::right;
            out << std::setw(13) << fixed6(line.estimate);
            if (line.free) {
                out << std::setw(11) << fixed6(line.se) << std::setw(11) << fixed6(line.z)
                    << std::setw(10) << fixed6(line.p);
            }
            out << "\n";
        }
    }
    out << "\n";
}

struct CollectedParams {
    // group label -> lines, in first-appearance order
    std::vector<std::pair<std::string, std::vector<ParamLine>>> loadings;
    std::vector<std::pair<std::string, std::vector<ParamLine>>> regressions;
    std::vector<std::pair<std::string, std::vector<ParamLine>>> covariances;
    std::vector<std::pair<std::string, std::vector<ParamLine>>> variances;
    std::vector<std::pair<std::string, std::vector<ParamLine>>> defined;
};

std::vector<ParamLine>& group_for(
    std::vector<std::pair<std::string, std::vector<ParamLine>>>& blocks,
    const std::string& key) {
    for (auto& [k, v] : blocks)
        if (k == key) return v;
    blocks.emplace_back(key, std::vector<ParamLine>{});
    return blocks.back().second;
}

CollectedParams collect_params(const FitRun& run) {
    CollectedParams out;
    const auto& est = run.estimate;
    for (std::size_t r = 0; r < run.table.rows.size(); ++r) {
        const auto& row = run.table.rows[r];
        if (row.op == ":=") continue;
        int idx = run.ram.table_row_param[r];
        ParamLine line;
        line.free = idx >= 0;
        if (idx >= 0) {
            line.estimate = est.theta[idx];
            if (est.se.size() > idx) {
                line.se = est.se[idx];
                line.z = est.z[idx];
                line.p = est.pvalue[idx];
            }
        } else {
            line.estimate = row.fixed_value.value_or(0.0);
        }
        std::string display = row.rhs;
        if (row.label) display += " (" + *row.label + ")";
        line.name = display;
        if (row.op == "=~") {
            group_for(out.loadings, row.lhs + " =~").push_back(line);
        } else if (row.op == "~") {
            group_for(out.regressions, row.lhs + " ~").push_back(line);
        } else if (row.lhs == row.rhs) {
            line.name = row.lhs;
            group_for(out.variances, "").push_back(line);
        } else {
            group_for(out.covariances, row.lhs + " ~~").push_back(line);
        }
    }
    for (const auto& d : est.defined) {
        ParamLine line;
        line.name = d.name;
        line.free = true;
        line.estimate = d.estimate;
        line.se = d.se;
        line.z = d.z;
        line.p = d.pvalue;
        group_for(out.defined, "").push_back(line);
    }
    return out;
}

}  // namespace

std::string render_summary(const FitRun& run) {
    std::ostringstream out;
    const auto& est = run.estimate;
    out << "revsem 0.1 " << (est.converged ? "ended normally" : "did NOT converge")
        << " after " << est.iterations << " iterations\n\n";
    header_line(out, "Estimator", "ML");
    header_line(out, "Optimization method", "quasi-Newton (box)");
    header_line(out, "Number of model parameters", std::to_string(run.table.free_count()));
    out << "\n";
    header_line(out, "Number of observations", std::to_string(run.moments.n));
    out << "\n";

    out << "Model Test User Model:\n";
    header_line(out, "Test statistic", format3(run.indices.chisq));
    header_line(out, "Degrees of freedom", std::to_string(run.indices.df));
    header_line(out, "P-value (Chi-square)", format_p(run.indices.pvalue));
    out << "\n";

    out << "Model Test Baseline Model:\n";
    header_line(out, "Test statistic", format3(run.indices.baseline_chisq));
    header_line(out, "Degrees of freedom", std::to_string(run.indices.baseline_df));
    out << "\n";

    out << "User Model versus Baseline Model:\n";
    header_line(out, "Comparative Fit Index (CFI)", format3(run.indices.cfi));
    header_line(out, "Tucker-Lewis Index (TLI)",
                run.indices.tli ? format3(*run.indices.tli) : "NA");
    out << "\n";

    out << "Root Mean Square Error of Approximation:\n";
    header_line(out, "RMSEA", run.indices.rmsea ? format3(*run.indices.rmsea) : "NA");
    header_line(out, "P-value RMSEA <= 0.05",
                run.indices.rmsea_pclose ? format3(*run.indices.rmsea_pclose) : "NA");
    out << "\n";

    out << "Standardized Root Mean Square Residual:\n";
    header_line(out, "SRMR", format3(run.indices.srmr));
    out << "\n";

    ThresholdVerdicts v = verdicts(run.indices);
    if (!v.verdict.empty() || v.saturated_note) {
        out << "Fit verdicts:\n";
        for (const auto& [index, verdict] : v.verdict) header_line(out, index, verdict);
        if (v.saturated_note) out << "  " << *v.saturated_note << "\n";
        if (v.large_n_note) out << "  " << *v.large_n_note << "\n";
        out << "\n";
    }

    CollectedParams params = collect_params(run);
    param_block(out, "Latent Variables:", params.loadings);
    param_block(out, "Regressions:", params.regressions);
    param_block(out, "Covariances:", params.covariances);
    param_block(out, "Variances:", params.variances);
    param_block(out, "Defined Parameters:", params.defined);

    for (const auto& w : est.warnings) out << "Warning: " << w << "\n";
    for (const auto& w : run.moments.warnings) out << "Warning: " << w << "\n";
    return out.str();
}

std::string render_machine(const FitRun& run) {
    std::ostringstream out;
    const auto& est = run.estimate;
    out << "converged=" << (est.converged ? "true" : "false") << "\n";
    out << "iterations=" << est.iterations << "\n";
    out << "estimator=ML\n";
    out << "n_parameters=" << run.table.free_count() << "\n";
    out << "n_observations=" << run.moments.n << "\n";
    out << "fml=" << full_precision(est.fml_value) << "\n";
    out << "chisq=" << format3(run.indices.chisq) << "\n";
    out << "chisq.full=" << full_precision(run.indices.chisq) << "\n";
    out << "df=" << run.indices.df << "\n";
    out << "pvalue=" << format_p(run.indices.pvalue) << "\n";
    if (run.indices.pvalue) out << "pvalue.full=" << full_precision(*run.indices.pvalue) << "\n";
    out << "baseline_chisq=" << format3(run.indices.baseline_chisq) << "\n";
    out << "baseline_df=" << run.indices.baseline_df << "\n";
    out << "cfi=" << format3(run.indices.cfi) << "\n";
    out << "cfi.full=" << full_precision(run.indices.cfi) << "\n";
    out << "tli=" << (run.indices.tli ? format3(*run.indices.tli) : "NA") << "\n";
    out << "rmsea=" << (run.indices.rmsea ? format3(*run.indices.rmsea) : "NA") << "\n";
    out << "rmsea_pclose="
        << (run.indices.rmsea_pclose ? format3(*run.indices.rmsea_pclose) : "NA") << "\n";
    out << "srmr=" << format3(run.indices.srmr) << "\n";

    out << "paramtable=section,lhs,op,rhs,label,estimate,se,z,p,free\n";
    for (std::size_t r = 0; r < run.table.rows.size(); ++r) {
        const auto& row = run.table.rows[r];
        if (row.op == ":=") continue;
        int idx = run.ram.table_row_param[r];
        std::string section = row.op == "=~" ? "loading"
                              : row.op == "~" ? "regression"
                              : row.lhs == row.rhs ? "variance"
                                                   : "covariance";
        double estimate = idx >= 0 ? est.theta[idx] : row.fixed_value.value_or(0.0);
        out << "param," << section << "," << row.lhs << "," << row.op << "," << row.rhs << ","
            << row.label.value_or("") << "," << fixed6(estimate) << ",";
        if (idx >= 0 && est.se.size() > idx)
            out << fixed6(est.se[idx]) << "," << fixed6(est.z[idx]) << ","
                << fixed6(est.pvalue[idx]);
        else
            out << ",,";
        out << "," << (idx >= 0 ? "1" : "0") << "\n";
    }
    for (const auto& d : est.defined)
        out << "param,defined," << d.name << ",:=,,," << fixed6(d.estimate) << ","
            << fixed6(d.se) << "," << fixed6(d.z) << "," << fixed6(d.pvalue) << ",1\n";
    return out.str();
}

std::string render_edge_list(const FitRun& run) {
    std::ostringstream out;
    for (std::size_t r = 0; r < run.table.rows.size(); ++r) {
        const auto& row = run.table.rows[r];
        if (row.op == ":=") continue;
        int idx = run.ram.table_row_param[r];
        double estimate = idx >= 0 ? run.estimate.theta[idx] : row.fixed_value.value_or(0.0);
        out << row.lhs << "\t" << row.op << "\t" << row.rhs << "\t" << fixed6(estimate) << "\n";
    }
    return out.str();
}

}  // namespace revsem
