#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "revsem/sem_core.hpp"

namespace revsem {

/// N multivariate-normal rows with covariance Sigma(theta), via the
/// Cholesky factor applied to seeded standard normals. Deterministic per
/// seed (same build).
Eigen::MatrixXd simulate_data(const RamMatrices& ram, const Eigen::VectorXd& theta,
                              std::size_t n, unsigned seed);

/// Same, from an explicit covariance matrix.
Eigen::MatrixXd simulate_mvn(const Eigen::MatrixXd& sigma, std::size_t n, unsigned seed);

}  // namespace revsem
