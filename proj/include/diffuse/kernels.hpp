#pragma once

#include <Eigen/Dense>
#include <utility>

namespace diffuse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws Error("InvalidInput", ...) if m is empty or contains non-finite
/// entries. Points are rows, coordinates are columns.
void check_data_matrix(const Matrix& m);

/// Coordinate-vector view of a point set: row j of the result holds
/// coordinate j of every point. Plain transpose, applied twice it is the
/// identity.
Matrix coordinate_vectors(const Matrix& data);

/// Pairwise squared Euclidean distances between the rows of `data`.
/// Symmetric with a zero diagonal. Parallel over row pairs; each pair is
/// accumulated serially, so results are reproducible per configuration.
Matrix pairwise_sq_dist(const Matrix& data);

/// Gaussian affinity w(i,j) = exp(-sq_dist(i,j) / (2*epsilon)).
Matrix gaussian_affinity(const Matrix& sq_dist, double epsilon);

/// Sum of all Gaussian affinities at scale epsilon, without materialising
/// the affinity matrix.
double kernel_sum(const Matrix& sq_dist, double epsilon);

/// Row-stochastic normalisation P(i,j) = W(i,j)/d(i) with d the row sums.
/// Throws ZeroDegree if a row of W sums to zero.
std::pair<Matrix, Vector> markov_normalize(const Matrix& W);

/// Symmetric conjugate A(i,j) = W(i,j)/sqrt(d(i)*d(j)). Shares the
/// spectrum of the Markov matrix and is built exactly symmetric.
std::pair<Matrix, Vector> symmetric_conjugate(const Matrix& W);

/// Median of the strictly positive entries of a symmetric distance matrix
/// (upper triangle). Returns 0 if all entries are zero.
double median_positive_sq_dist(const Matrix& sq_dist);

} // namespace diffuse
