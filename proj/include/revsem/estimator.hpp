#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revsem/optimizer.hpp"
#include "revsem/records.hpp"
#include "revsem/sem_core.hpp"

namespace revsem {

enum class CovDivisor { n, n_minus_1 };

struct SampleMoments {
    Eigen::MatrixXd s;
    std::vector<std::string> names;
    std::size_t n = 0;
    CovDivisor divisor = CovDivisor::n;
    std::vector<std::string> warnings;  // constant columns etc.

    /// Reorders variables to `order`; throws when a name is missing.
    SampleMoments reordered(const std::vector<std::string>& order) const;
};

SampleMoments sample_moments(const std::vector<AnalysisRow>& rows,
                             CovDivisor divisor = CovDivisor::n);
SampleMoments sample_moments(const Eigen::MatrixXd& data,
                             const std::vector<std::string>& names,
                             CovDivisor divisor = CovDivisor::n);

/// Normal-theory ML discrepancy: ln|Sigma| + tr(S Sigma^-1) - ln|S| - p.
/// Returns +inf for non-positive-definite Sigma.
double fml(const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma);

enum class InfoMethod { expected, observed };

struct FitOptions {
    OptimizeOptions optimizer;
    /// Multiplier turning F_ML into the test statistic; N-1 by default.
    bool multiplier_n_minus_1 = true;
    bool variance_lower_bound_zero = false;
    InfoMethod info = InfoMethod::expected;
};

struct DefinedEstimate {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    double pvalue = 1.0;
};

struct EstimationResult {
    Eigen::VectorXd theta;
    bool converged = false;
    int iterations = 0;
    double fml_value = 0.0;
    double multiplier = 0.0;  // N or N-1, whichever was requested
    Eigen::MatrixXd vcov;
    Eigen::VectorXd se;
    Eigen::VectorXd z;
    Eigen::VectorXd pvalue;
    std::vector<DefinedEstimate> defined;
    std::vector<std::string> warnings;  // Heywood cases etc.
};

/// Start values: 0 for paths and covariances, 1 for free loadings, half the
/// observed variance of the dependent variable for variance parameters.
Eigen::VectorXd start_values(const RamMatrices& ram, const SampleMoments& moments);

Eigen::VectorXd fml_gradient(const RamMatrices& ram, const Eigen::MatrixXd& s,
                             const Eigen::VectorXd& theta);

EstimationResult optimize(const RamMatrices& ram, const SampleMoments& moments,
                          const FitOptions& options = {});

/// Fills vcov/se/z/p on `result`; expected information by default.
void standard_errors(EstimationResult& result, const RamMatrices& ram,
                     const SampleMoments& moments, const FitOptions& options);

/// Delta-method estimates for every `:=` parameter.
void delta_defined(EstimationResult& result, const RamMatrices& ram);

struct BootstrapResult {
    std::map<std::string, double> se;  // per free parameter and per defined
    int replicates_used = 0;
    int replicates_failed = 0;
    std::optional<std::string> note;
};

BootstrapResult bootstrap(const Eigen::MatrixXd& data, const std::vector<std::string>& names,
                          const RamMatrices& ram, const std::vector<std::string>& observed_order,
                          int b, unsigned seed, const FitOptions& options = {},
                          CovDivisor divisor = CovDivisor::n);

BootstrapResult bootstrap(const std::vector<AnalysisRow>& rows, const RamMatrices& ram,
                          const std::vector<std::string>& observed_order, int b,
                          unsigned seed, const FitOptions& options = {},
                          CovDivisor divisor = CovDivisor::n);

struct BaselineFit {
    double chisq = 0.0;
    int df = 0;
};

/// Independence model: free variances, zero covariances. Closed form.
BaselineFit fit_baseline(const SampleMoments& moments, bool multiplier_n_minus_1 = true);

}  // namespace revsem
