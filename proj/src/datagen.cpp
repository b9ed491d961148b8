#include "diffuse/datagen.hpp"

#include "diffuse/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <algorithm>

namespace diffuse {

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = uniform_signed();
    v = uniform_signed();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

namespace {

// Even-odd rule at the query point; vertices are (x, y) pairs.
bool point_in_polygon(double x, double y,
                      const std::vector<std::array<double, 2>>& poly) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = poly[i][0], yi = poly[i][1];
    const double xj = poly[j][0], yj = poly[j][1];
    const bool crosses = (yi > y) != (yj > y);
    if (crosses && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

} // namespace

SynthCube synth_cube(int rows, int cols, int bands,
                     const std::vector<Region>& regions, double noise_sigma,
                     const std::vector<Anomaly>& anomalies,
                     std::uint64_t seed) {
  if (rows < 1 || cols < 1 || bands < 1)
    throw Error("InvalidInput", "cube dimensions must be positive");
  if (regions.empty()) throw InvalidPartition("no regions given");
  for (const Region& r : regions) {
    if (r.spectrum.size() != bands)
      throw InvalidPartition("region spectrum length does not match bands");
    if (r.polygon.size() < 3)
      throw InvalidPartition("region polygon needs at least 3 vertices");
  }

  SynthCube out;
  out.cube.rows = rows;
  out.cube.cols = cols;
  out.cube.band_images.assign(static_cast<size_t>(bands),
                              Matrix::Zero(rows, cols));
  out.truth.setZero(rows, cols);

  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      int region = 0;
      for (size_t r = 0; r < regions.size(); ++r) {
        if (point_in_polygon(j + 0.5, i + 0.5, regions[r].polygon)) {
          region = static_cast<int>(r) + 1;
          break;
        }
      }
      if (region == 0)
        throw InvalidPartition("pixel (" + std::to_string(i) + "," +
                               std::to_string(j) + ") not covered by any region");
      out.truth(i, j) = region;
    }
  }

  Rng rng(seed);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Vector& spectrum =
          regions[static_cast<size_t>(out.truth(i, j) - 1)].spectrum;
      for (int k = 0; k < bands; ++k) {
        double v = spectrum(k);
        if (noise_sigma > 0.0) v += noise_sigma * rng.gaussian();
        out.cube.band_images[static_cast<size_t>(k)](i, j) = v;
      }
    }

  for (const Anomaly& a : anomalies) {
    if (a.row < 0 || a.row >= rows || a.col < 0 || a.col >= cols)
      throw Error("InvalidInput", "anomaly outside the image");
    if (a.spectrum.size() != bands)
      throw Error("InvalidInput", "anomaly spectrum length mismatch");
    for (int k = 0; k < bands; ++k)
      out.cube.band_images[static_cast<size_t>(k)](a.row, a.col) = a.spectrum(k);
  }
  out.anomalies = anomalies;
  return out;
}

Matrix synth_manifold(int intrinsic_dim, int ambient_dim, int count,
                      double noise_sigma, std::uint64_t seed) {
  if (intrinsic_dim < 1 || ambient_dim < intrinsic_dim || count < 1)
    throw Error("InvalidInput", "need 1 <= intrinsic_dim <= ambient_dim");

  Rng rng(seed);

  // Rotation first, then point coordinates, then noise: a fixed call order
  // keeps streams reproducible.
  Matrix rotation;
  if (intrinsic_dim < ambient_dim) {
    Matrix raw(ambient_dim, ambient_dim);
    for (int i = 0; i < ambient_dim; ++i)
      for (int j = 0; j < ambient_dim; ++j) raw(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(raw);
    rotation = qr.householderQ() * Matrix::Identity(ambient_dim, ambient_dim);
  }

  Matrix points(count, ambient_dim);
  for (int p = 0; p < count; ++p) {
    Vector patch(intrinsic_dim);
    for (int k = 0; k < intrinsic_dim; ++k) patch(k) = rng.uniform();
    if (intrinsic_dim < ambient_dim)
      points.row(p) = (rotation.leftCols(intrinsic_dim) * patch).transpose();
    else
      points.row(p) = patch.transpose();
  }

  if (noise_sigma > 0.0)
    for (int p = 0; p < count; ++p)
      for (int k = 0; k < ambient_dim; ++k)
        points(p, k) += noise_sigma * rng.gaussian();
  return points;
}

SynthVideo synth_video(const VideoSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || spec.frames < 1)
    throw Error("InvalidInput", "video dimensions must be positive");
  if (spec.channels != 1 && spec.channels != 3)
    throw Error("InvalidInput", "channels must be 1 or 3");

  // Static base texture spanning the full [0,255] range so background
  // estimates keep the scale of the input frames.
  Matrix base(spec.rows, spec.cols);
  const double span = std::max(1, spec.rows + spec.cols - 2);
  for (int i = 0; i < spec.rows; ++i)
    for (int j = 0; j < spec.cols; ++j) {
      const double ramp = (i + j) / span;
      const double wave =
          0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (3.0 * i + 5.0 * j) / span);
      base(i, j) = 255.0 * (0.7 * ramp + 0.3 * wave);
    }

  static constexpr std::array<double, 3> kChannelScale = {1.0, 0.85, 0.7};

  SynthVideo out;
  out.seq.rows = spec.rows;
  out.seq.cols = spec.cols;
  out.seq.channels = spec.channels;

  Rng rng(spec.seed);
  for (int t = 0; t < spec.frames; ++t) {
    const int r0 = static_cast<int>(std::lround(spec.square.row0 + t * spec.square.vr));
    const int c0 = static_cast<int>(std::lround(spec.square.col0 + t * spec.square.vc));
    if (spec.square.size > 0 &&
        (r0 < 0 || c0 < 0 || r0 + spec.square.size > spec.rows ||
         c0 + spec.square.size > spec.cols))
      throw Error("InvalidInput", "square leaves the frame at t=" +
                                      std::to_string(t));

    Matrix gray(spec.rows, spec.cols);
    Mask truth = Mask::Zero(spec.rows, spec.cols);
    for (int i = 0; i < spec.rows; ++i)
      for (int j = 0; j < spec.cols; ++j) {
        double v = base(i, j);
        if (spec.mode == VideoMode::flicker) {
          const double phase = 2.0 * std::numbers::pi * (i + 2.0 * j) / span;
          v += spec.flicker_amp *
               std::sin(2.0 * std::numbers::pi * t / spec.flicker_period + phase);
        }
        const bool in_square = spec.square.size > 0 && i >= r0 &&
                               i < r0 + spec.square.size && j >= c0 &&
                               j < c0 + spec.square.size;
        if (in_square) {
          v = spec.square.intensity;
          truth(i, j) = 1;
        }
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.gaussian();
        gray(i, j) = std::clamp(v, 0.0, 255.0);
      }

    std::vector<Matrix> planes;
    if (spec.channels == 1) {
      planes.push_back(std::move(gray));
    } else {
      for (int c = 0; c < 3; ++c) {
        Matrix plane(spec.rows, spec.cols);
        for (int i = 0; i < spec.rows; ++i)
          for (int j = 0; j < spec.cols; ++j)
            plane(i, j) = truth(i, j) != 0
                              ? gray(i, j)
                              : std::clamp(gray(i, j) *
                                               kChannelScale[static_cast<size_t>(c)],
                                           0.0, 255.0);
        planes.push_back(std::move(plane));
      }
    }
    out.seq.frames.push_back(std::move(planes));
    out.truth.push_back(std::move(truth));
  }
  return out;
}

} // namespace diffuse
