#pragma once

#include "diffuse/video.hpp"

namespace diffuse {

struct BlockPartition {
  int grid_rows = 1;
  int grid_cols = 1;
  int overlap = 20; // pixels shared by adjacent blocks
};

struct BlockRect {
  int r0 = 0, r1 = 0; // half-open row range
  int c0 = 0, c1 = 0;
};

/// Splits rows x cols into a grid of blocks; every block except those on
/// the first grid row/column is extended upward/leftward so adjacent
/// blocks share `overlap` pixels. Throws BlockTooSmall when the grid does
/// not fit.
std::vector<BlockRect> make_blocks(int rows, int cols,
                                   const BlockPartition& partition);

/// Runs the static-background pipeline independently per block and merges
/// the block masks with a pixelwise OR. A 1x1 grid reduces to the plain
/// sequential run.
std::vector<Mask> parallel_blocks(const std::vector<Matrix>& frames,
                                  const BlockPartition& partition,
                                  const SbsdbOptions& options);

/// Same extension for the dynamic-background pipeline.
std::vector<Mask> parallel_blocks_rgb(const FrameSequence& rtd,
                                      const FrameSequence& bgd,
                                      const BlockPartition& partition,
                                      const DbsdbOptions& options);

} // namespace diffuse
