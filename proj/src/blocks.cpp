#include "diffuse/blocks.hpp"

#include "diffuse/errors.hpp"

#include <algorithm>

namespace diffuse {

std::vector<BlockRect> make_blocks(int rows, int cols,
                                   const BlockPartition& partition) {
  if (partition.grid_rows < 1 || partition.grid_cols < 1)
    throw Error("InvalidInput", "grid must be at least 1x1");
  if (partition.overlap < 0)
    throw Error("InvalidInput", "overlap must be >= 0");
  if (partition.grid_rows > rows || partition.grid_cols > cols)
    throw BlockTooSmall("grid exceeds the frame size");

  auto boundary = [](int extent, int parts, int k) {
    return static_cast<int>(static_cast<long>(extent) * k / parts);
  };

  std::vector<BlockRect> blocks;
  for (int gr = 0; gr < partition.grid_rows; ++gr) {
    for (int gc = 0; gc < partition.grid_cols; ++gc) {
      BlockRect b;
      b.r0 = boundary(rows, partition.grid_rows, gr);
      b.r1 = boundary(rows, partition.grid_rows, gr + 1);
      b.c0 = boundary(cols, partition.grid_cols, gc);
      b.c1 = boundary(cols, partition.grid_cols, gc + 1);
      if (gr > 0) b.r0 = std::max(0, b.r0 - partition.overlap);
      if (gc > 0) b.c0 = std::max(0, b.c0 - partition.overlap);
      if (b.r1 - b.r0 < 1 || b.c1 - b.c0 < 1)
        throw BlockTooSmall("a block is empty");
      blocks.push_back(b);
    }
  }
  return blocks;
}

namespace {

std::vector<Matrix> crop(const std::vector<Matrix>& frames,
                         const BlockRect& b) {
  std::vector<Matrix> out;
  out.reserve(frames.size());
  for (const Matrix& f : frames)
    out.push_back(f.block(b.r0, b.c0, b.r1 - b.r0, b.c1 - b.c0));
  return out;
}

FrameSequence crop(const FrameSequence& seq, const BlockRect& b) {
  FrameSequence out;
  out.rows = b.r1 - b.r0;
  out.cols = b.c1 - b.c0;
  out.channels = seq.channels;
  out.frames.reserve(seq.frames.size());
  for (const auto& frame : seq.frames) {
    std::vector<Matrix> planes;
    planes.reserve(frame.size());
    for (const Matrix& p : frame)
      planes.push_back(p.block(b.r0, b.c0, out.rows, out.cols));
    out.frames.push_back(std::move(planes));
  }
  return out;
}

void merge_or(std::vector<Mask>& target, const std::vector<Mask>& block_masks,
              const BlockRect& b) {
  for (size_t t = 0; t < target.size(); ++t) {
    Mask& full = target[t];
    const Mask& part = block_masks[t];
    for (int i = 0; i < part.rows(); ++i)
      for (int j = 0; j < part.cols(); ++j)
        if (part(i, j) != 0) full(b.r0 + i, b.c0 + j) = 1;
  }
}

} // namespace

std::vector<Mask> parallel_blocks(const std::vector<Matrix>& frames,
                                  const BlockPartition& partition,
                                  const SbsdbOptions& options) {
  if (frames.empty()) throw Error("InvalidInput", "no frames");
  if (partition.grid_rows == 1 && partition.grid_cols == 1)
    return sbsdb(frames, options); // bit-identical to the sequential run

  const int rows = static_cast<int>(frames[0].rows());
  const int cols = static_cast<int>(frames[0].cols());
  const std::vector<BlockRect> blocks = make_blocks(rows, cols, partition);

  std::vector<Mask> out(frames.size(), Mask::Zero(rows, cols));
  std::vector<std::vector<Mask>> per_block(blocks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < static_cast<long>(blocks.size()); ++k)
    per_block[static_cast<size_t>(k)] =
        sbsdb(crop(frames, blocks[static_cast<size_t>(k)]), options);
  for (size_t k = 0; k < blocks.size(); ++k)
    merge_or(out, per_block[k], blocks[k]);
  return out;
}

std::vector<Mask> parallel_blocks_rgb(const FrameSequence& rtd,
                                      const FrameSequence& bgd,
                                      const BlockPartition& partition,
                                      const DbsdbOptions& options) {
  check_sequence(rtd);
  if (partition.grid_rows == 1 && partition.grid_cols == 1)
    return dbsdb(rtd, bgd, options);

  const std::vector<BlockRect> blocks =
      make_blocks(rtd.rows, rtd.cols, partition);
  std::vector<Mask> out(static_cast<size_t>(rtd.size()),
                        Mask::Zero(rtd.rows, rtd.cols));
  std::vector<std::vector<Mask>> per_block(blocks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < static_cast<long>(blocks.size()); ++k)
    per_block[static_cast<size_t>(k)] =
        dbsdb(crop(rtd, blocks[static_cast<size_t>(k)]),
              crop(bgd, blocks[static_cast<size_t>(k)]), options);
  for (size_t k = 0; k < blocks.size(); ++k)
    merge_or(out, per_block[k], blocks[k]);
  return out;
}

} // namespace diffuse
