#pragma once

#include "diffuse/spectral.hpp"

#include <vector>

namespace diffuse {

/// Reflectance volume, one matrix per band. Pixel (i,j) of band k is
/// band_images[k](i,j). Rectangular images are supported.
struct HyperCube {
  int rows = 0;
  int cols = 0;
  std::vector<Matrix> band_images;

  int bands() const { return static_cast<int>(band_images.size()); }
  long pixel_count() const { return static_cast<long>(rows) * cols; }
};

void check_cube(const HyperCube& cube);

/// Flattens to a (rows*cols) x bands matrix; pixel p = i*cols + j.
Matrix flatten_bands(const HyperCube& cube);

/// Per-pixel mean over all bands.
Matrix wav_image(const HyperCube& cube);

/// Reduced "color" cube: the diffusion-bases projections reshaped back to
/// image layout, one matrix per color.
struct ReducedCube {
  int rows = 0;
  int cols = 0;
  std::vector<Matrix> layers;
  EmbeddingKind provenance = EmbeddingKind::DB;
  double epsilon_used = 0.0;
  int eta = 0;
  bool eta_saturated = false;

  int colors() const { return static_cast<int>(layers.size()); }
};

struct ReduceOptions {
  EpsilonSpec epsilon = AutoScan{};
  double delta = 1e-3;
  EmbeddingKind variant = EmbeddingKind::DB;
  int force_eta = 0; // 0 = truncate by delta
};

/// Phase-1 reduction: every band is min-max normalised to [0,1] (constant
/// bands map to zero), the normalised band vectors feed the diffusion-bases
/// embedding, and the projections are reshaped to rows x cols x eta.
ReducedCube reduce_cube(const HyperCube& cube, const ReduceOptions& options);

/// Same reduction for an arbitrary pixel subset given as a spectra matrix
/// (one pixel per row). Used by the drill-down path.
struct FlatReduction {
  Matrix colors; // pixels x eta
  double epsilon_used = 0.0;
  int eta = 0;
  bool eta_saturated = false;
};
FlatReduction reduce_spectra(const Matrix& spectra, const ReduceOptions& options);

/// Per-layer min-max normalisation to [0,1]; constant layers map to zeros.
ReducedCube normalize_layers(const ReducedCube& g);
Matrix normalize_columns_01(const Matrix& m);

struct QuantizedCube {
  int rows = 0;
  int cols = 0;
  int levels = 0;
  std::vector<Eigen::MatrixXi> layers; // values in {1..levels}

  int colors() const { return static_cast<int>(layers.size()); }
};

/// Uniform quantisation q = floor(levels * ghat), clamped into
/// {1..levels} so the boundary values 0 and levels*1 stay inside the
/// stated range.
QuantizedCube quantize(const ReducedCube& ghat, int levels);
Eigen::MatrixXi quantize_matrix(const Matrix& ghat01, int levels);

} // namespace diffuse
