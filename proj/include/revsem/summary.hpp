#pragma once

#include <string>

#include "revsem/estimator.hpp"
#include "revsem/fitstats.hpp"
#include "revsem/model_dsl.hpp"
#include "revsem/sem_core.hpp"

namespace revsem {

/// Everything produced by one model fit, kept together for rendering.
struct FitRun {
    ModelAst ast;
    ParameterTable table;
    RamMatrices ram;
    SampleMoments moments;  // reordered to model observed order
    EstimationResult estimate;
    FitIndices indices;
    Eigen::MatrixXd implied_sigma;
    int df = 0;
};

/// lower -> build_ram -> optimize -> standard_errors -> delta_defined ->
/// fit indices, against moments already computed from the data.
FitRun run_fit(const std::string& model_text, const SampleMoments& moments,
               LoweringMode mode, const FitOptions& options = {},
               bool case_insensitive_vars = false);

/// Three-section human-readable summary: header, fit measures, parameter
/// estimates, with the headings used by the standard SEM summary layout.
std::string render_summary(const FitRun& run);

/// key=value lines plus a delimited parameter table; carries the same
/// numbers as the human-readable summary at 6 decimals.
std::string render_machine(const FitRun& run);

/// Fitted structure as a machine-readable edge list (one edge per line).
std::string render_edge_list(const FitRun& run);

}  // namespace revsem
