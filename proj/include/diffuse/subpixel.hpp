#pragma once

#include "diffuse/cube.hpp"

#include <vector>

namespace diffuse {

struct SubPixelParams {
  int alpha = 1;      // neighborhood radius
  double tau1 = 0.04; // contrast threshold
  int tau2 = 3;       // neighbor-count threshold
};

struct SubPixelHit {
  int row = 0;
  int col = 0;
  std::vector<int> layers; // layers (0-based) where the pixel is isolated
};

/// Detects single-pixel anomalies in a normalised reduced cube. A pixel is
/// isolated in a layer when more than tau2 of its alpha-neighborhood values
/// differ from it by more than tau1; to count as a sub-pixel segment it
/// must be isolated in at least two layers. Neighborhoods are clipped at
/// the image border. Results are ordered by (row, col).
std::vector<SubPixelHit> detect_subpixel(const ReducedCube& ghat,
                                         const SubPixelParams& params);

} // namespace diffuse
