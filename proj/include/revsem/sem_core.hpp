#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revsem/model_dsl.hpp"

namespace revsem {

/// One free-parameter location: matrix 'A' (directed) or 'S' (symmetric),
/// row/col in roster order. S cells also occupy the mirrored cell.
struct CellRef {
    char matrix = 'A';
    int row = 0;
    int col = 0;
};

struct DefinedParam {
    std::string name;
    ExprPtr expr;
};

/// RAM representation: roster is observed variables first (data order),
/// latents after. A[i,j] holds the coefficient of j -> i; S holds
/// variances/covariances; the observed filter F is implicit in the
/// observed-first ordering.
struct RamMatrices {
    std::vector<std::string> variables;
    int n_observed = 0;
    Eigen::MatrixXd fixed_a;  // fixed cells of A, zeros elsewhere
    Eigen::MatrixXd fixed_s;

    std::vector<std::vector<CellRef>> param_cells;  // per free parameter
    std::vector<std::string> param_names;           // label, or "lhs op rhs"
    std::vector<std::string> param_lhs, param_op, param_rhs;
    std::vector<double> start;
    std::vector<bool> is_variance;  // diagonal S cell
    std::map<std::string, int> label_to_param;
    std::vector<DefinedParam> defined;
    /// Free-parameter index per ParameterTable row; -1 fixed, -2 defined.
    std::vector<int> table_row_param;

    int n_free() const { return static_cast<int>(param_cells.size()); }
    int index_of(const std::string& variable) const;

    void fill(const Eigen::VectorXd& theta, Eigen::MatrixXd& a, Eigen::MatrixXd& s) const;
    std::string debug_dump(const Eigen::VectorXd& theta) const;
};

RamMatrices build_ram(const ParameterTable& table,
                      const std::vector<std::string>& observed_order);

struct ImpliedMoments {
    Eigen::MatrixXd sigma;  // p x p, observed block
    bool admissible = true;
};

/// Sigma(theta) = F (I-A)^-1 S (I-A)^-T F^T. Non-invertible (I-A) is
/// reported as non-admissible rather than thrown, so the optimizer can
/// reject the step.
ImpliedMoments implied_cov(const RamMatrices& ram, const Eigen::VectorXd& theta);

/// Sigma plus d Sigma / d theta_k for every free parameter.
struct ImpliedWithDerivatives {
    Eigen::MatrixXd sigma;
    std::vector<Eigen::MatrixXd> dsigma;
    bool admissible = true;
};

ImpliedWithDerivatives implied_cov_with_derivatives(const RamMatrices& ram,
                                                    const Eigen::VectorXd& theta);

/// df = p(p+1)/2 - free parameter count; negative df throws.
int count_df(const ParameterTable& table, int p);

}  // namespace revsem
