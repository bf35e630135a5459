#include "revsem/simulate.hpp"

#include <random>

#include "revsem/errors.hpp"

namespace revsem {

Eigen::MatrixXd simulate_mvn(const Eigen::MatrixXd& sigma, std::size_t n, unsigned seed) {
    if (n < 1) throw ConfigError("simulate: N must be >= 1");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw EstimationError("simulate: implied covariance is not positive definite");
    Eigen::MatrixXd l = llt.matrixL();
    const int p = static_cast<int>(sigma.rows());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) z(static_cast<Eigen::Index>(i), j) = normal(rng);
    return z * l.transpose();
}

Eigen::MatrixXd simulate_data(const RamMatrices& ram, const Eigen::VectorXd& theta,
                              std::size_t n, unsigned seed) {
    auto implied = implied_cov(ram, theta);
    if (!implied.admissible)
        throw EstimationError("simulate: (I-A) is singular at the given parameters");
    return simulate_mvn(implied.sigma, n, seed);
}

}  // namespace revsem
