#include "revsem/optimizer.hpp"

#include <cmath>

#include "revsem/errors.hpp"

namespace revsem {

namespace {

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

// Gradient components pushing against an active bound do not count toward
// convergence.
double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    double norm = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        double gi = g[i];
        if (x[i] <= lo[i] && gi > 0) gi = 0;
        if (x[i] >= hi[i] && gi < 0) gi = 0;
        norm = std::max(norm, std::abs(gi));
    }
    return norm;
}

}  // namespace

OptimizeOutcome minimize_boxed(const Objective& f, const Gradient& grad,
                               const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                               const Eigen::VectorXd& upper, const OptimizeOptions& options) {
    const int n = static_cast<int>(x0.size());
    OptimizeOutcome out;
    out.x = clamp(x0, lower, upper);
    out.f = f(out.x);
    if (!std::isfinite(out.f))
        throw EstimationError("optimizer: starting point is not admissible");
    out.gradient = grad(out.x);

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

    for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
        if (projected_gradient_norm(out.x, out.gradient, lower, upper) <= options.gradient_tol) {
            out.converged = true;
            return out;
        }
        Eigen::VectorXd direction = -(hinv * out.gradient);
        if (direction.dot(out.gradient) >= 0.0) {
            hinv.setIdentity();
            direction = -out.gradient;
        }

        double alpha = 1.0;
        Eigen::VectorXd x_new;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            x_new = clamp(out.x + alpha * direction, lower, upper);
            Eigen::VectorXd step = x_new - out.x;
            if (step.lpNorm<Eigen::Infinity>() == 0.0) break;
            double slope = out.gradient.dot(step);
            f_new = f(x_new);
            if (std::isfinite(f_new) && slope < 0.0 && f_new <= out.f + 1e-4 * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // No admissible descent step; report the best point found.
            out.converged =
                projected_gradient_norm(out.x, out.gradient, lower, upper) <=
                options.gradient_tol;
            return out;
        }

        Eigen::VectorXd g_new = grad(x_new);
        Eigen::VectorXd s = x_new - out.x;
        Eigen::VectorXd y = g_new - out.gradient;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            // Standard BFGS inverse-Hessian update.
            Eigen::VectorXd hy = hinv * y;
            double yhy = y.dot(hy);
            hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
            hinv -= (hy * s.transpose() + s * hy.transpose()) / sy;
        }

        double f_change = std::abs(out.f - f_new);
        out.x = x_new;
        out.f = f_new;
        out.gradient = g_new;
        // The relative-f stop only applies once the gradient is already
        // small, so a flat stretch far from a stationary point cannot end
        // the search.
        if (f_change <= options.f_rel_tol * std::max(1.0, std::abs(f_new)) &&
            projected_gradient_norm(out.x, out.gradient, lower, upper) <= 1e-4) {
            ++out.iterations;
            out.converged = true;
            return out;
        }
    }
    out.converged =
        projected_gradient_norm(out.x, out.gradient, lower, upper) <= options.gradient_tol;
    return out;
}

}  // namespace revsem
