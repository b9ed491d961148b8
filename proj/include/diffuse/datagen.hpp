#pragma once

#include "diffuse/cube.hpp"
#include "diffuse/video.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace diffuse {

/// Portable 64-bit generator (SplitMix64). Identical seeds and call order
/// reproduce identical streams on every platform. Gaussians come from the
/// Marsaglia polar method; each raw pass produces a pair, returned in the
/// order (first, cached second).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_signed() { return 2.0 * uniform() - 1.0; } // [-1, 1)
  double gaussian();

private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

struct Region {
  std::vector<std::array<double, 2>> polygon; // (x=col, y=row) vertices
  Vector spectrum;
};

struct Anomaly {
  int row = 0;
  int col = 0;
  Vector spectrum;
};

struct SynthCube {
  HyperCube cube;
  Eigen::MatrixXi truth; // region index (1-based) per pixel
  std::vector<Anomaly> anomalies;
};

/// Region spectra plus per-value Gaussian noise; anomaly pixels are
/// overwritten with their exact spectra afterwards. Pixels are assigned to
/// the first polygon containing their center (even-odd rule); a pixel in
/// no polygon raises InvalidPartition. Noise call order: pixels row-major,
/// bands innermost.
SynthCube synth_cube(int rows, int cols, int bands,
                     const std::vector<Region>& regions, double noise_sigma,
                     const std::vector<Anomaly>& anomalies, std::uint64_t seed);

/// N points uniform on a d-dimensional unit patch, rotated into ambient
/// dimension n (identity when d == n), plus isotropic Gaussian noise.
Matrix synth_manifold(int intrinsic_dim, int ambient_dim, int count,
                      double noise_sigma, std::uint64_t seed);

enum class VideoMode { static_bg, flicker };

struct SquareSpec {
  int size = 8;
  double row0 = 0.0, col0 = 0.0; // top-left at frame 0
  double vr = 0.0, vc = 0.0;     // per-frame velocity
  double intensity = 220.0;
};

struct VideoSpec {
  int rows = 64, cols = 64, frames = 60;
  VideoMode mode = VideoMode::static_bg;
  SquareSpec square;
  double noise_sigma = 0.0;
  int channels = 1;
  double flicker_amp = 16.0;
  int flicker_period = 12;
  std::uint64_t seed = 1;
};

struct SynthVideo {
  FrameSequence seq;
  std::vector<Mask> truth; // square pixels per frame
};

/// Textured background spanning [0,255] (sinusoidally modulated over time
/// in flicker mode) with a moving bright square composited on top. The
/// square must stay inside the frame. In RGB mode the background is scaled
/// per channel and the square keeps its intensity in every channel.
SynthVideo synth_video(const VideoSpec& spec);

} // namespace diffuse
