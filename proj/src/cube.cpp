#include "diffuse/cube.hpp"

#include "diffuse/errors.hpp"

#include <cmath>

namespace diffuse {

void check_cube(const HyperCube& cube) {
  if (cube.rows < 1 || cube.cols < 1 || cube.bands() < 1)
    throw Error("InvalidInput", "cube must have positive rows, cols, bands");
  for (const Matrix& band : cube.band_images) {
    if (band.rows() != cube.rows || band.cols() != cube.cols)
      throw Error("InvalidInput", "band image shape mismatch");
    if (!band.allFinite())
      throw Error("InvalidInput", "cube contains non-finite values");
  }
}

Matrix flatten_bands(const HyperCube& cube) {
  Matrix flat(cube.pixel_count(), cube.bands());
  for (int k = 0; k < cube.bands(); ++k) {
    const Matrix& band = cube.band_images[static_cast<size_t>(k)];
    for (int i = 0; i < cube.rows; ++i)
      for (int j = 0; j < cube.cols; ++j)
        flat(static_cast<long>(i) * cube.cols + j, k) = band(i, j);
  }
  return flat;
}

Matrix wav_image(const HyperCube& cube) {
  check_cube(cube);
  Matrix out = Matrix::Zero(cube.rows, cube.cols);
  const double inv = 1.0 / cube.bands();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < cube.rows; ++i) {
    for (int j = 0; j < cube.cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < cube.bands(); ++k)
        s += cube.band_images[static_cast<size_t>(k)](i, j);
      out(i, j) = s * inv;
    }
  }
  return out;
}

Matrix normalize_columns_01(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double lo = m.col(c).minCoeff();
    const double hi = m.col(c).maxCoeff();
    if (hi > lo)
      out.col(c) = (m.col(c).array() - lo) / (hi - lo);
    else
      out.col(c).setZero(); // constant column
  }
  return out;
}

FlatReduction reduce_spectra(const Matrix& spectra,
                             const ReduceOptions& options) {
  check_data_matrix(spectra);
  if (spectra.rows() < 2)
    throw TooFewPixels(spectra.rows());

  DbOptions db;
  db.epsilon = options.epsilon;
  db.delta = options.delta;
  db.variant = options.variant;
  db.force_eta = options.force_eta;

  DbResult result = db_embed(normalize_columns_01(spectra), db);

  FlatReduction out;
  out.colors = std::move(result.embedding.coords);
  out.epsilon_used = result.epsilon_used;
  out.eta = result.embedding.eta;
  out.eta_saturated = result.embedding.eta_saturated;
  return out;
}

ReducedCube reduce_cube(const HyperCube& cube, const ReduceOptions& options) {
  check_cube(cube);
  if (cube.bands() < 2)
    throw Error("InvalidInput", "cube needs at least 2 bands for a basis");

  const FlatReduction flat = reduce_spectra(flatten_bands(cube), options);

  ReducedCube out;
  out.rows = cube.rows;
  out.cols = cube.cols;
  out.provenance = options.variant;
  out.epsilon_used = flat.epsilon_used;
  out.eta = flat.eta;
  out.eta_saturated = flat.eta_saturated;
  out.layers.reserve(static_cast<size_t>(flat.colors.cols()));
  for (Eigen::Index k = 0; k < flat.colors.cols(); ++k) {
    Matrix layer(cube.rows, cube.cols);
    for (int i = 0; i < cube.rows; ++i)
      for (int j = 0; j < cube.cols; ++j)
        layer(i, j) = flat.colors(static_cast<long>(i) * cube.cols + j, k);
    out.layers.push_back(std::move(layer));
  }
  return out;
}

ReducedCube normalize_layers(const ReducedCube& g) {
  ReducedCube out = g;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < g.colors(); ++k) {
    const Matrix& layer = g.layers[static_cast<size_t>(k)];
    const double lo = layer.minCoeff();
    const double hi = layer.maxCoeff();
    Matrix& dst = out.layers[static_cast<size_t>(k)];
    if (hi > lo)
      dst = (layer.array() - lo) / (hi - lo);
    else
      dst.setZero();
  }
  return out;
}

Eigen::MatrixXi quantize_matrix(const Matrix& ghat01, int levels) {
  Eigen::MatrixXi q(ghat01.rows(), ghat01.cols());
  for (Eigen::Index i = 0; i < ghat01.rows(); ++i) {
    for (Eigen::Index j = 0; j < ghat01.cols(); ++j) {
      int v = static_cast<int>(std::floor(levels * ghat01(i, j)));
      if (v < 1) v = 1;
      if (v > levels) v = levels;
      q(i, j) = v;
    }
  }
  return q;
}

QuantizedCube quantize(const ReducedCube& ghat, int levels) {
  if (levels < 2) throw Error("InvalidInput", "need at least 2 levels");
  QuantizedCube out;
  out.rows = ghat.rows;
  out.cols = ghat.cols;
  out.levels = levels;
  out.layers.resize(static_cast<size_t>(ghat.colors()));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ghat.colors(); ++k)
    out.layers[static_cast<size_t>(k)] =
        quantize_matrix(ghat.layers[static_cast<size_t>(k)], levels);
  return out;
}

} // namespace diffuse
