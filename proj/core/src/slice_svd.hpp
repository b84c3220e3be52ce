#pragma once

#include <Eigen/Core>

namespace tctv::svd {

struct RealSvd {
  Eigen::MatrixXd u;   // m x k
  Eigen::VectorXd s;   // k, nonincreasing
  Eigen::MatrixXd vh;  // k x n (V^T)
};

struct ComplexSvd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd vh;  // V^H
};

// Economy (k = min(m,n)) or full (square U, V) SVD of one face slice.
// Throws std::runtime_error on non-convergence; callers annotate with the
// slice index.
RealSvd decompose(const Eigen::MatrixXd& a, bool full);
ComplexSvd decompose(const Eigen::MatrixXcd& a, bool full);

// Singular values only.
Eigen::VectorXd values(const Eigen::MatrixXd& a);
Eigen::VectorXd values(const Eigen::MatrixXcd& a);

}  // namespace tctv::svd
