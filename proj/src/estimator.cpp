#include "revsem/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

namespace {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double log_det_pd(const Eigen::MatrixXd& m, bool* ok = nullptr) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        if (ok) {
            *ok = false;
            return 0.0;
        }
        throw DataError("matrix is not positive definite");
    }
    if (ok) *ok = true;
    double ld = 0.0;
    for (int i = 0; i < m.rows(); ++i) ld += std::log(llt.matrixL()(i, i));
    return 2.0 * ld;
}

}  // namespace

SampleMoments SampleMoments::reordered(const std::vector<std::string>& order) const {
    std::vector<int> idx;
    idx.reserve(order.size());
    std::vector<std::string> missing;
    for (const auto& name : order) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) missing.push_back(name);
        else idx.push_back(static_cast<int>(it - names.begin()));
    }
    if (!missing.empty()) {
        std::string msg = "data is missing model variable(s):";
        for (const auto& m : missing) msg += " " + m;
        throw DataError(msg);
    }
    SampleMoments out;
    out.names = order;
    out.n = n;
    out.divisor = divisor;
    out.warnings = warnings;
    out.s.resize(order.size(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j < order.size(); ++j) out.s(i, j) = s(idx[i], idx[j]);
    return out;
}

SampleMoments sample_moments(const Eigen::MatrixXd& data,
                             const std::vector<std::string>& names, CovDivisor divisor) {
    const auto n = data.rows();
    const auto p = data.cols();
    if (n < 2) throw DataError("sample_moments: need at least 2 rows");
    SampleMoments out;
    out.names = names;
    out.n = static_cast<std::size_t>(n);
    out.divisor = divisor;
    Eigen::RowVectorXd mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - mean;
    double denom = divisor == CovDivisor::n ? static_cast<double>(n)
                                            : static_cast<double>(n - 1);
    out.s = (centered.transpose() * centered) / denom;
    out.s = ((out.s + out.s.transpose()) / 2.0).eval();
    for (int j = 0; j < p; ++j)
        if (out.s(j, j) <= 0.0)
            out.warnings.push_back("constant column: " + names[static_cast<std::size_t>(j)]);
    return out;
}

SampleMoments sample_moments(const std::vector<AnalysisRow>& rows, CovDivisor divisor) {
    Eigen::MatrixXd data(rows.size(), 6);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < 6; ++j) data(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(j)) = rows[i].field(j);
    return sample_moments(data, AnalysisRow::variable_names(), divisor);
}

double fml(const Eigen::MatrixXd& s, const Eigen::MatrixXd& sigma) {
    const int p = static_cast<int>(s.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    double log_det_sigma = 0.0;
    for (int i = 0; i < p; ++i) log_det_sigma += std::log(llt.matrixL()(i, i));
    log_det_sigma *= 2.0;
    double trace = llt.solve(s).trace();
    double log_det_s = log_det_pd(s);
    double value = log_det_sigma + trace - log_det_s - p;
    // Guard against tiny negative values from rounding at the optimum.
    if (value < 0.0 && value > -1e-10) value = 0.0;
    return value;
}

Eigen::VectorXd start_values(const RamMatrices& ram, const SampleMoments& moments) {
    Eigen::VectorXd theta(ram.n_free());
    for (int k = 0; k < ram.n_free(); ++k) {
        theta[k] = ram.start[k];
        if (!ram.is_variance[k]) continue;
        // Half the observed variance of the variable; latent variances
        // borrow the first observed variance as a scale hint.
        const std::string& var = ram.param_lhs[k];
        auto it = std::find(moments.names.begin(), moments.names.end(), var);
        double base = it != moments.names.end()
                          ? moments.s(it - moments.names.begin(), it - moments.names.begin())
                          : moments.s(0, 0);
        theta[k] = 0.5 * std::max(base, 1e-3);
    }
    return theta;
}

Eigen::VectorXd fml_gradient(const RamMatrices& ram, const Eigen::MatrixXd& s,
                             const Eigen::VectorXd& theta) {
    auto implied = implied_cov_with_derivatives(ram, theta);
    if (!implied.admissible)
        throw EstimationError("fml_gradient: non-admissible point ((I-A) singular)");
    Eigen::LLT<Eigen::MatrixXd> llt(implied.sigma);
    if (llt.info() != Eigen::Success)
        throw EstimationError("fml_gradient: implied covariance not positive definite");
    const int p = static_cast<int>(s.rows());
    Eigen::MatrixXd sigma_inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd weight = sigma_inv - sigma_inv * s * sigma_inv;
    Eigen::VectorXd grad(ram.n_free());
    for (int k = 0; k < ram.n_free(); ++k)
        grad[k] = (weight * implied.dsigma[k]).trace();
    return grad;
}

EstimationResult optimize(const RamMatrices& ram, const SampleMoments& moments_in,
                          const FitOptions& options) {
    std::vector<std::string> observed(ram.variables.begin(),
                                      ram.variables.begin() + ram.n_observed);
    SampleMoments moments = moments_in.reordered(observed);
    const Eigen::MatrixXd& s = moments.s;
    log_det_pd(s);  // rejects non-PD sample covariance up front

    const int n_free = ram.n_free();
    Eigen::VectorXd lower = Eigen::VectorXd::Constant(n_free, -std::numeric_limits<double>::infinity());
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(n_free, std::numeric_limits<double>::infinity());
    if (options.variance_lower_bound_zero)
        for (int k = 0; k < n_free; ++k)
            if (ram.is_variance[k]) lower[k] = 0.0;

    auto objective = [&](const Eigen::VectorXd& theta) {
        auto implied = implied_cov(ram, theta);
        if (!implied.admissible) return std::numeric_limits<double>::infinity();
        return fml(s, implied.sigma);
    };
    auto gradient = [&](const Eigen::VectorXd& theta) { return fml_gradient(ram, s, theta); };

    OptimizeOutcome opt = minimize_boxed(objective, gradient, start_values(ram, moments),
                                         lower, upper, options.optimizer);

    EstimationResult result;
    result.theta = opt.x;
    result.converged = opt.converged;
    result.iterations = opt.iterations;
    result.fml_value = opt.f;
    result.multiplier = options.multiplier_n_minus_1 ? static_cast<double>(moments.n - 1)
                                                     : static_cast<double>(moments.n);
    for (int k = 0; k < n_free; ++k)
        if (ram.is_variance[k] && opt.x[k] < 0.0)
            result.warnings.push_back("Heywood case: negative variance estimate for " +
                                      ram.param_names[k]);
    return result;
}

void standard_errors(EstimationResult& result, const RamMatrices& ram,
                     const SampleMoments& moments_in, const FitOptions& options) {
    std::vector<std::string> observed(ram.variables.begin(),
                                      ram.variables.begin() + ram.n_observed);
    SampleMoments moments = moments_in.reordered(observed);
    const int n_free = ram.n_free();
    const int p = ram.n_observed;

    Eigen::MatrixXd info(n_free, n_free);
    if (options.info == InfoMethod::expected) {
        auto implied = implied_cov_with_derivatives(ram, result.theta);
        if (!implied.admissible)
            throw EstimationError("standard_errors: non-admissible solution");
        Eigen::LLT<Eigen::MatrixXd> llt(implied.sigma);
        if (llt.info() != Eigen::Success)
            throw EstimationError("standard_errors: implied covariance not positive definite");
        Eigen::MatrixXd sigma_inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
        std::vector<Eigen::MatrixXd> w(n_free);
        for (int k = 0; k < n_free; ++k) w[k] = sigma_inv * implied.dsigma[k];
        for (int j = 0; j < n_free; ++j)
            for (int k = j; k < n_free; ++k) {
                double h = (w[j] * w[k]).trace();
                info(j, k) = info(k, j) = 0.5 * h;
            }
    } else {
        // Observed information: central finite differences of the analytic
        // gradient.
        for (int j = 0; j < n_free; ++j) {
            double h = 1e-5 * (1.0 + std::abs(result.theta[j]));
            Eigen::VectorXd tp = result.theta, tm = result.theta;
            tp[j] += h;
            tm[j] -= h;
            Eigen::VectorXd column =
                (fml_gradient(ram, moments.s, tp) - fml_gradient(ram, moments.s, tm)) / (2 * h);
            info.col(j) = 0.5 * column;
        }
        info = ((info + info.transpose()) / 2.0).eval();
    }
    info *= result.multiplier;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(info);
    double max_eval = eigen.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<std::string> null_space;
    for (int i = 0; i < n_free; ++i) {
        if (eigen.eigenvalues()[i] > 1e-10 * std::max(max_eval, 1.0)) continue;
        for (int k = 0; k < n_free; ++k)
            if (std::abs(eigen.eigenvectors()(k, i)) > 0.3) null_space.push_back(ram.param_names[k]);
    }
    if (!null_space.empty()) {
        std::sort(null_space.begin(), null_space.end());
        null_space.erase(std::unique(null_space.begin(), null_space.end()), null_space.end());
        std::string msg = "information matrix is singular; locally non-identified parameter(s):";
        for (const auto& name : null_space) msg += " " + name;
        throw EstimationError(msg);
    }

    result.vcov = info.inverse();
    result.vcov = ((result.vcov + result.vcov.transpose()) / 2.0).eval();
    result.se.resize(n_free);
    result.z.resize(n_free);
    result.pvalue.resize(n_free);
    for (int k = 0; k < n_free; ++k) {
        result.se[k] = std::sqrt(std::max(result.vcov(k, k), 0.0));
        result.z[k] = result.se[k] > 0 ? result.theta[k] / result.se[k] : 0.0;
        result.pvalue[k] = result.se[k] > 0 ? normal_two_sided_p(result.z[k]) : 1.0;
    }
}

namespace {

struct ExprValue {
    double value = 0.0;
    Eigen::VectorXd grad;
};

ExprValue eval_expr(const Expr& e, const RamMatrices& ram, const Eigen::VectorXd& theta,
                    const std::map<std::string, ExprValue>& defined) {
    switch (e.kind) {
        case Expr::Kind::ref: {
            auto dit = defined.find(e.name);
            if (dit != defined.end()) return dit->second;
            auto lit = ram.label_to_param.find(e.name);
            if (lit == ram.label_to_param.end())
                throw EstimationError("defined parameter references label '" + e.name +
                                      "' which was not estimated");
            ExprValue v;
            v.value = theta[lit->second];
            v.grad = Eigen::VectorXd::Zero(theta.size());
            v.grad[lit->second] = 1.0;
            return v;
        }
        case Expr::Kind::add: {
            ExprValue a = eval_expr(*e.lhs, ram, theta, defined);
            ExprValue b = eval_expr(*e.rhs, ram, theta, defined);
            return ExprValue{a.value + b.value, a.grad + b.grad};
        }
        case Expr::Kind::mul: {
            ExprValue a = eval_expr(*e.lhs, ram, theta, defined);
            ExprValue b = eval_expr(*e.rhs, ram, theta, defined);
            return ExprValue{a.value * b.value, a.value * b.grad + b.value * a.grad};
        }
    }
    throw EstimationError("unreachable expression kind");
}

}  // namespace

void delta_defined(EstimationResult& result, const RamMatrices& ram) {
    result.defined.clear();
    std::map<std::string, ExprValue> known;
    for (const auto& def : ram.defined) {
        ExprValue v = eval_expr(*def.expr, ram, result.theta, known);
        known[def.name] = v;
        DefinedEstimate est;
        est.name = def.name;
        est.estimate = v.value;
        if (result.vcov.size() > 0) {
            double var = v.grad.dot(result.vcov * v.grad);
            est.se = std::sqrt(std::max(var, 0.0));
            est.z = est.se > 0 ? est.estimate / est.se : 0.0;
            est.pvalue = est.se > 0 ? normal_two_sided_p(est.z) : 1.0;
        }
        result.defined.push_back(est);
    }
}

BootstrapResult bootstrap(const Eigen::MatrixXd& data, const std::vector<std::string>& names,
                          const RamMatrices& ram, const std::vector<std::string>& observed_order,
                          int b, unsigned seed, const FitOptions& options, CovDivisor divisor) {
    if (b < 1) throw ConfigError("bootstrap: B must be >= 1");
    BootstrapResult out;
    if (b == 1) {
        out.note = "bootstrap SE not available: B=1 is too small";
        out.replicates_used = 0;
        return out;
    }

    const std::size_t n = static_cast<std::size_t>(data.rows());
    if (n == 0) throw DataError("bootstrap: no rows");
    std::vector<std::vector<double>> draws(
        static_cast<std::size_t>(ram.n_free()) + ram.defined.size());

    for (int r = 0; r < b; ++r) {
        // Per-replicate stream split from the seed, so parallel or serial
        // execution gives the same resamples.
        std::seed_seq seq{seed, static_cast<unsigned>(r)};
        std::mt19937 rng(seq);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        Eigen::MatrixXd resample(data.rows(), data.cols());
        for (std::size_t i = 0; i < n; ++i)
            resample.row(static_cast<Eigen::Index>(i)) =
                data.row(static_cast<Eigen::Index>(pick(rng)));

        try {
            SampleMoments moments =
                sample_moments(resample, names, divisor).reordered(observed_order);
            EstimationResult fit = optimize(ram, moments, options);
            if (!fit.converged) {
                ++out.replicates_failed;
                continue;
            }
            std::map<std::string, ExprValue> known;
            for (int k = 0; k < ram.n_free(); ++k)
                draws[static_cast<std::size_t>(k)].push_back(fit.theta[k]);
            for (std::size_t d = 0; d < ram.defined.size(); ++d) {
                ExprValue v = eval_expr(*ram.defined[d].expr, ram, fit.theta, known);
                known[ram.defined[d].name] = v;
                draws[static_cast<std::size_t>(ram.n_free()) + d].push_back(v.value);
            }
            ++out.replicates_used;
        } catch (const Error&) {
            ++out.replicates_failed;
        }
    }

    if (out.replicates_failed * 2 > b) {
        std::ostringstream msg;
        msg << "bootstrap failed: " << out.replicates_failed << " of " << b
            << " replicates did not converge";
        throw EstimationError(msg.str());
    }

    auto stddev = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(xs.size() - 1));
    };
    for (int k = 0; k < ram.n_free(); ++k)
        out.se[ram.param_names[k]] = stddev(draws[static_cast<std::size_t>(k)]);
    for (std::size_t d = 0; d < ram.defined.size(); ++d)
        out.se[ram.defined[d].name] = stddev(draws[static_cast<std::size_t>(ram.n_free()) + d]);
    return out;
}

BootstrapResult bootstrap(const std::vector<AnalysisRow>& rows, const RamMatrices& ram,
                          const std::vector<std::string>& observed_order, int b,
                          unsigned seed, const FitOptions& options, CovDivisor divisor) {
    const auto names = AnalysisRow::variable_names();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i].field(j);
    return bootstrap(data, names, ram, observed_order, b, seed, options, divisor);
}

BaselineFit fit_baseline(const SampleMoments& moments, bool multiplier_n_minus_1) {
    const int p = static_cast<int>(moments.s.rows());
    double log_det_s = log_det_pd(moments.s);
    double log_det_diag = 0.0;
    for (int i = 0; i < p; ++i) {
        if (moments.s(i, i) <= 0.0) throw DataError("baseline model: zero variance column");
        log_det_diag += std::log(moments.s(i, i));
    }
    double f_baseline = log_det_diag - log_det_s;
    double mult = multiplier_n_minus_1 ? static_cast<double>(moments.n - 1)
                                       : static_cast<double>(moments.n);
    return BaselineFit{std::max(0.0, mult * f_baseline), p * (p - 1) / 2};
}

}  // namespace revsem
