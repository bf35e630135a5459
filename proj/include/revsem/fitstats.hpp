#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

namespace revsem {

double chisq_upper_tail(double x, double df);
/// P(X > x) for a noncentral chi-square; ncp = 0 falls back to central.
double noncentral_chisq_upper_tail(double x, double df, double ncp);

struct ChisqTest {
    double chisq = 0.0;
    std::optional<double> pvalue;  // absent when df = 0
};

ChisqTest chisq_test(double fml_value, double multiplier, int df);

struct IncrementalIndices {
    double cfi = 1.0;
    std::optional<double> tli;  // absent when df = 0
    bool degenerate_baseline = false;
};

IncrementalIndices cfi_tli(double chisq, int df, double chisq_baseline, int df_baseline);

struct RmseaResult {
    double rmsea = 0.0;
    double pclose = 1.0;  // P(RMSEA <= 0.05)
};

/// (N-1) denominator by default; that convention reproduces the reported
/// values from chisq/df/N alone.
std::optional<RmseaResult> rmsea(double chisq, int df, std::size_t n,
                                 bool use_n_minus_1 = true);

double srmr(const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma);

struct FitIndices {
    double chisq = 0.0;
    int df = 0;
    std::optional<double> pvalue;
    double baseline_chisq = 0.0;
    int baseline_df = 0;
    double cfi = 1.0;
    std::optional<double> tli;
    std::optional<double> rmsea;
    std::optional<double> rmsea_pclose;
    double srmr = 0.0;
    std::size_t n = 0;
};

FitIndices compute_fit_indices(double fml_value, double multiplier, int df,
                               double baseline_chisq, int baseline_df,
                               const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma,
                               std::size_t n, bool rmsea_n_minus_1 = true);

struct ThresholdVerdicts {
    std::map<std::string, std::string> verdict;  // index name -> verdict text
    std::optional<std::string> saturated_note;
    std::optional<std::string> large_n_note;
};

/// SRMR < 0.08 good; CFI/TLI >= 0.95 good, >= 0.90 acceptable;
/// RMSEA <= 0.05 good, <= 0.08 acceptable. df = 0 flags a saturated model.
ThresholdVerdicts verdicts(const FitIndices& indices);

/// Fixed-point display: 3 decimals with a "0.000" floor for p-values.
std::string format_p(std::optional<double> p);
std::string format3(double v);

}  // namespace revsem
