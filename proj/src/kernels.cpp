#include "diffuse/kernels.hpp"

#include "diffuse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace diffuse {

void check_data_matrix(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1)
    throw Error("InvalidInput", "data matrix must have at least one row and "
                                "one column");
  if (!m.allFinite())
    throw Error("InvalidInput", "data matrix contains non-finite entries");
}

Matrix coordinate_vectors(const Matrix& data) { return data.transpose(); }

Matrix pairwise_sq_dist(const Matrix& data) {
  const Eigen::Index n = data.rows();
  Matrix out(n, n);
  out.setZero();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < data.cols(); ++k) {
        const double diff = data(i, k) - data(j, k);
        s += diff * diff;
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

Matrix gaussian_affinity(const Matrix& sq_dist, double epsilon) {
  if (epsilon <= 0.0)
    throw Error("InvalidInput", "epsilon must be positive");
  const double inv = 1.0 / (2.0 * epsilon);
  Matrix W(sq_dist.rows(), sq_dist.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < sq_dist.rows(); ++i)
    for (Eigen::Index j = 0; j < sq_dist.cols(); ++j)
      W(i, j) = std::exp(-sq_dist(i, j) * inv);
  return W;
}

double kernel_sum(const Matrix& sq_dist, double epsilon) {
  const double inv = 1.0 / (2.0 * epsilon);
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (Eigen::Index i = 0; i < sq_dist.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < sq_dist.cols(); ++j)
      row += std::exp(-sq_dist(i, j) * inv);
    total += row;
  }
  return total;
}

namespace {

Vector degrees_or_throw(const Matrix& W) {
  Vector d(W.rows());
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < W.cols(); ++j) s += W(i, j);
    if (!(s > 0.0)) throw ZeroDegree(static_cast<int>(i));
    d(i) = s;
  }
  return d;
}

} // namespace

std::pair<Matrix, Vector> markov_normalize(const Matrix& W) {
  Vector d = degrees_or_throw(W);
  Matrix P(W.rows(), W.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    for (Eigen::Index j = 0; j < W.cols(); ++j) P(i, j) = W(i, j) / d(i);
  return {std::move(P), std::move(d)};
}

std::pair<Matrix, Vector> symmetric_conjugate(const Matrix& W) {
  Vector d = degrees_or_throw(W);
  Vector root = d.array().sqrt();
  Matrix A(W.rows(), W.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double a = W(i, j) / (root(i) * root(j));
      A(i, j) = a;
      A(j, i) = a; // exact symmetry by construction
    }
  }
  return {std::move(A), std::move(d)};
}

double median_positive_sq_dist(const Matrix& sq_dist) {
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(sq_dist.rows()) * sq_dist.rows() / 2);
  for (Eigen::Index i = 0; i < sq_dist.rows(); ++i)
    for (Eigen::Index j = i + 1; j < sq_dist.cols(); ++j)
      if (sq_dist(i, j) > 0.0) vals.push_back(sq_dist(i, j));
  if (vals.empty()) return 0.0;
  std::sort(vals.begin(), vals.end());
  return vals[vals.size() / 2];
}

} // namespace diffuse
