#include "diffuse/nystrom.hpp"

#include "diffuse/errors.hpp"
#include "diffuse/spectral.hpp"

#include <cmath>

namespace diffuse {

NystromModel nystrom_train(const Matrix& training, double sigma_ext,
                           double floor_ratio) {
  check_data_matrix(training);
  if (sigma_ext <= 0.0)
    throw Error("InvalidInput", "sigma_ext must be positive");

  const Eigen::Index n = training.rows();
  const Matrix sq = pairwise_sq_dist(training);
  Matrix K(n, n);
  const double inv = 1.0 / (sigma_ext * sigma_ext);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = std::exp(-sq(i, j) * inv);

  EigenPairs pairs = spectral_decompose(K);

  NystromModel model;
  model.training = training;
  model.sigma_ext = sigma_ext;
  model.mu = std::move(pairs.lambdas);
  model.phi = std::move(pairs.vectors);
  model.floor_ratio = floor_ratio;
  const double floor = floor_ratio * std::abs(model.mu(0));
  model.usable = 0;
  while (model.usable < n && std::abs(model.mu(model.usable)) >= floor)
    ++model.usable;
  return model;
}

namespace {

Vector kernel_row(const NystromModel& model, const Eigen::RowVectorXd& x) {
  const Eigen::Index n = model.training.rows();
  Vector k(n);
  const double inv = 1.0 / (model.sigma_ext * model.sigma_ext);
  for (Eigen::Index y = 0; y < n; ++y) {
    const double sq = (x - model.training.row(y)).squaredNorm();
    k(y) = std::exp(-sq * inv);
  }
  return k;
}

} // namespace

double nystrom_extend_eigenfunction(const NystromModel& model, int l,
                                    const Eigen::RowVectorXd& x) {
  if (l < 0 || l >= model.usable) throw SmallEigenvalue(l);
  const Vector k = kernel_row(model, x);
  return k.dot(model.phi.col(l)) / model.mu(l);
}

double nystrom_extend(const NystromModel& model, const Vector& f,
                      const Eigen::RowVectorXd& x) {
  if (f.size() != model.training.rows())
    throw Error("InvalidInput", "function values must cover the training set");
  const Vector k = kernel_row(model, x);
  double out = 0.0;
  for (int l = 0; l < model.usable; ++l) {
    const double coeff = model.phi.col(l).dot(f);
    out += coeff * k.dot(model.phi.col(l)) / model.mu(l);
  }
  return out;
}

} // namespace diffuse
