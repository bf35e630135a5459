#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>

namespace revsem {

struct OptimizeOptions {
    double gradient_tol = 1e-6;   // max-norm of the projected gradient
    double f_rel_tol = 1e-10;     // relative change in objective
    int max_iterations = 10000;
};

struct OptimizeOutcome {
    Eigen::VectorXd x;
    double f = std::numeric_limits<double>::infinity();
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
};

/// Objective returning f(x); must return +inf at non-admissible points.
using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Gradient of the objective; only called at admissible points.
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// BFGS with Armijo backtracking and projection onto [lower, upper] boxes
/// (use -inf/+inf entries for unbounded coordinates). The starting point
/// must be admissible (finite objective).
OptimizeOutcome minimize_boxed(const Objective& f, const Gradient& g,
                               const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                               const Eigen::VectorXd& upper, const OptimizeOptions& options);

}  // namespace revsem
