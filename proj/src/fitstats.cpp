#include "revsem/fitstats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

double chisq_upper_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double noncentral_chisq_upper_tail(double x, double df, double ncp) {
    if (x <= 0.0) return 1.0;
    if (ncp <= 0.0) return chisq_upper_tail(x, df);
    boost::math::non_central_chi_squared dist(df, ncp);
    return boost::math::cdf(boost::math::complement(dist, x));
}

ChisqTest chisq_test(double fml_value, double multiplier, int df) {
    if (df < 0) throw EstimationError("chisq_test: negative degrees of freedom");
    ChisqTest out;
    out.chisq = std::max(0.0, multiplier * fml_value);
    if (df > 0) out.pvalue = chisq_upper_tail(out.chisq, df);
    return out;
}

IncrementalIndices cfi_tli(double chisq, int df, double chisq_baseline, int df_baseline) {
    IncrementalIndices out;
    double d = std::max(chisq - df, 0.0);
    double db = std::max({chisq_baseline - df_baseline, d, 0.0});
    out.cfi = db > 0.0 ? 1.0 - d / db : 1.0;
    out.cfi = std::min(std::max(out.cfi, 0.0), 1.0);
    if (chisq_baseline <= static_cast<double>(df_baseline)) out.degenerate_baseline = true;
    if (df > 0 && df_baseline > 0) {
        double ratio_b = chisq_baseline / df_baseline;
        if (ratio_b != 1.0)
            out.tli = (ratio_b - chisq / df) / (ratio_b - 1.0);
    }
    return out;
}

std::optional<RmseaResult> rmsea(double chisq, int df, std::size_t n, bool use_n_minus_1) {
    if (df < 1) return std::nullopt;
    double denom = static_cast<double>(use_n_minus_1 ? n - 1 : n);
    RmseaResult out;
    out.rmsea = std::sqrt(std::max(chisq - df, 0.0) / (df * denom));
    // Close fit: P(RMSEA <= 0.05) = P(chisq_{df, ncp} >= observed) with
    // ncp = df * denom * 0.05^2.
    double ncp = df * denom * 0.05 * 0.05;
    out.pclose = noncentral_chisq_upper_tail(chisq, df, ncp);
    return out;
}

double srmr(const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma) {
    const int p = static_cast<int>(s.rows());
    if (sigma.rows() != p) throw EstimationError("srmr: dimension mismatch");
    double sum = 0.0;
    int cells = 0;
    for (int i = 0; i < p; ++i) {
        if (s(i, i) <= 0.0 || sigma(i, i) <= 0.0)
            throw DataError("srmr: zero diagonal element");
        for (int j = 0; j <= i; ++j) {
            double rs = s(i, j) / std::sqrt(s(i, i) * s(j, j));
            double rm = sigma(i, j) / std::sqrt(sigma(i, i) * sigma(j, j));
            sum += (rs - rm) * (rs - rm);
            ++cells;
        }
    }
    return std::sqrt(sum / cells);
}

FitIndices compute_fit_indices(double fml_value, double multiplier, int df,
                               double baseline_chisq, int baseline_df,
                               const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma,
                               std::size_t n, bool rmsea_n_minus_1) {
    FitIndices out;
    ChisqTest test = chisq_test(fml_value, multiplier, df);
    out.chisq = test.chisq;
    out.df = df;
    out.pvalue = test.pvalue;
    out.baseline_chisq = baseline_chisq;
    out.baseline_df = baseline_df;
    IncrementalIndices inc = cfi_tli(out.chisq, df, baseline_chisq, baseline_df);
    out.cfi = inc.cfi;
    out.tli = inc.tli;
    if (auto r = rmsea(out.chisq, df, n, rmsea_n_minus_1)) {
        out.rmsea = r->rmsea;
        out.rmsea_pclose = r->pclose;
    }
    out.srmr = srmr(s, sigma);
    out.n = n;
    return out;
}

ThresholdVerdicts verdicts(const FitIndices& indices) {
    ThresholdVerdicts out;
    if (indices.df == 0) {
        out.saturated_note = "saturated model (df = 0) - fit indices uninformative";
        return out;
    }
    auto band_high_good = [](double v, double good, double acceptable) {
        if (v >= good) return std::string("good fit");
        if (v >= acceptable) return std::string("acceptable fit");
        return std::string("not good");
    };
    out.verdict["cfi"] = band_high_good(indices.cfi, 0.95, 0.90);
    if (indices.tli) out.verdict["tli"] = band_high_good(*indices.tli, 0.95, 0.90);
    if (indices.rmsea) {
        if (*indices.rmsea <= 0.05) out.verdict["rmsea"] = "good fit";
        else if (*indices.rmsea <= 0.08) out.verdict["rmsea"] = "acceptable fit";
        else out.verdict["rmsea"] = "not good";
    }
    out.verdict["srmr"] = indices.srmr < 0.08 ? "good fit" : "not good";
    if (indices.n >= 1000)
        out.large_n_note =
            "chi-square is statistically significant at this sample size; "
            "chi-square/df ignored for large dataset";
    return out;
}

std::string format3(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << v;
    std::string s = out.str();
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string format_p(std::optional<double> p) {
    if (!p) return "NA";
    return format3(std::max(*p, 0.0));
}

}  // namespace revsem
