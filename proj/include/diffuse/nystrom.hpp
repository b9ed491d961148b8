#pragma once

#include "diffuse/kernels.hpp"

namespace diffuse {

/// Out-of-sample extension state: eigenpairs (mu_l, phi_l) of the extension
/// kernel exp(-||x-y||^2 / sigma_ext^2) on the training points. Note the
/// denominator convention here is sigma^2, unlike the 2*epsilon used by the
/// embedding kernel.
struct NystromModel {
  Matrix training; // one point per row
  double sigma_ext = 1.0;
  Vector mu;  // kernel eigenvalues, descending magnitude
  Matrix phi; // orthonormal eigenvectors (columns)
  double floor_ratio = 1e-10;
  int usable = 0; // count of components with |mu_l| >= floor_ratio * |mu_1|
};

NystromModel nystrom_train(const Matrix& training, double sigma_ext,
                           double floor_ratio = 1e-10);

/// phi_bar_l(x) = (1/mu_l) * sum_y k(x, y) phi_l(y). Reproduces phi_l
/// exactly at training points. Throws SmallEigenvalue when component l is
/// below the floor.
double nystrom_extend_eigenfunction(const NystromModel& model, int l,
                                    const Eigen::RowVectorXd& x);

/// Extension of a function given by its training-set values:
/// f_bar(x) = sum_l <phi_l, f> phi_bar_l(x), over the usable components.
double nystrom_extend(const NystromModel& model, const Vector& f,
                      const Eigen::RowVectorXd& x);

} // namespace diffuse
