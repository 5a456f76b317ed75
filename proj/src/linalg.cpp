#include "conelyap/linalg.hpp"

#include <algorithm>
#include <limits>

namespace conelyap::linalg {

namespace {

double threshold(const Eigen::VectorXd& sv, double tol) {
  double top = sv.size() > 0 ? sv(0) : 0.0;
  return tol * std::max(1.0, top);
}

}  // namespace

Mat null_space(const Mat& m, double tol) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat row_space(const Mat& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Mat(n, 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixV().leftCols(r);
}

int rank(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  int r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return r;
}

Mat vstack(const Mat& top, const Mat& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  Mat out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Mat normalized_rows(const Mat& m, double tol) {
  std::vector<Vec> keep;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double nrm = m.row(i).norm();
    if (nrm > tol) keep.push_back(m.row(i).transpose() / nrm);
  }
  return from_rows(keep, m.cols());
}

Mat from_rows(const std::vector<Vec>& rows, Eigen::Index cols) {
  Mat out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return out;
}

std::vector<Vec> to_rows(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

double min_eigenvalue_on(const Mat& q, const Mat& basis) {
  if (basis.cols() == 0) return std::numeric_limits<double>::infinity();
  Mat reduced = basis.transpose() * q * basis;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(reduced, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace conelyap::linalg
