#pragma once

#include <Eigen/Dense>
#include <vector>

namespace conelyap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

/// Orthonormal basis (as columns) of {x : M x = 0}.
Mat null_space(const Mat& m, double tol = 1e-9);

/// Orthonormal basis (as columns) of the span of the rows of M.
Mat row_space(const Mat& m, double tol = 1e-9);

int rank(const Mat& m, double tol = 1e-9);

/// Stack two row-matrices with the same column count.
Mat vstack(const Mat& top, const Mat& bottom);

/// Rows of M normalized to unit length; rows with norm <= tol are dropped.
Mat normalized_rows(const Mat& m, double tol = 1e-12);

Mat from_rows(const std::vector<Vec>& rows, Eigen::Index cols);
std::vector<Vec> to_rows(const Mat& m);

/// Least eigenvalue of the symmetric matrix B^T Q B (B given by columns).
/// Returns +inf when B has no columns.
double min_eigenvalue_on(const Mat& q, const Mat& basis);

}  // namespace linalg
}  // namespace conelyap
