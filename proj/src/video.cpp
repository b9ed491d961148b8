#include "diffuse/video.hpp"

#include "diffuse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace diffuse {

void check_sequence(const FrameSequence& seq) {
  if (seq.frames.empty())
    throw Error("InvalidInput", "sequence has no frames");
  if (seq.channels != 1 && seq.channels != 3)
    throw Error("InvalidInput", "sequence must have 1 or 3 channels");
  for (const auto& frame : seq.frames) {
    if (static_cast<int>(frame.size()) != seq.channels)
      throw Error("InvalidInput", "frame channel count mismatch");
    for (const Matrix& plane : frame)
      if (plane.rows() != seq.rows || plane.cols() != seq.cols)
        throw Error("InvalidInput", "frame shape mismatch");
  }
}

FrameSequence gray_view(const FrameSequence& rgb) {
  check_sequence(rgb);
  if (rgb.channels == 1) return rgb;
  FrameSequence out;
  out.rows = rgb.rows;
  out.cols = rgb.cols;
  out.channels = 1;
  out.frames.resize(rgb.frames.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(rgb.frames.size()); ++t) {
    const auto& f = rgb.frames[static_cast<size_t>(t)];
    out.frames[static_cast<size_t>(t)] = {0.299 * f[0] + 0.587 * f[1] +
                                          0.114 * f[2]};
  }
  return out;
}

std::vector<Matrix> gray_planes(const FrameSequence& seq) {
  if (seq.channels != 1)
    throw Error("InvalidInput", "expected a grayscale sequence");
  std::vector<Matrix> planes;
  planes.reserve(seq.frames.size());
  for (const auto& frame : seq.frames) planes.push_back(frame[0]);
  return planes;
}

Matrix normalize_0_255(const Matrix& m) {
  const double lo = m.minCoeff();
  const double hi = m.maxCoeff();
  if (hi > lo) return 255.0 * (m.array() - lo) / (hi - lo);
  // Constant estimate: clamp instead of stretching so subtraction stays
  // meaningful.
  return m.array().min(255.0).max(0.0);
}

namespace {

Vector frame_vector(const Matrix& frame) {
  Vector v(frame.size());
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < frame.rows(); ++i)
    for (Eigen::Index j = 0; j < frame.cols(); ++j) v(p++) = frame(i, j);
  return v;
}

// Serial accumulation; shared by the incremental and full paths so both
// produce identical partial sums.
double sq_dist_between(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double diff = a(k) - b(k);
    s += diff * diff;
  }
  return s;
}

} // namespace

SlidingWindowKernel::SlidingWindowKernel(const std::vector<Matrix>& frames,
                                         int first, int window) {
  if (window < 2) throw Error("InvalidInput", "window must be >= 2");
  if (first + window > static_cast<int>(frames.size()))
    throw WindowTooLarge(window, static_cast<long>(frames.size()) - first);
  window_.reserve(static_cast<size_t>(window));
  for (int t = 0; t < window; ++t)
    window_.push_back(frame_vector(frames[static_cast<size_t>(first + t)]));
  sq_dist_.setZero(window, window);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < window; ++i)
    for (int j = i + 1; j < window; ++j) {
      const double s = sq_dist_between(window_[static_cast<size_t>(i)],
                                       window_[static_cast<size_t>(j)]);
      sq_dist_(i, j) = s;
      sq_dist_(j, i) = s;
    }
}

void SlidingWindowKernel::slide(const Matrix& incoming) {
  const int m = static_cast<int>(window_.size());
  window_.erase(window_.begin());
  window_.push_back(frame_vector(incoming));
  // Shift the surviving block up-left, then fill the new frame's row/col.
  for (int i = 0; i < m - 1; ++i)
    for (int j = 0; j < m - 1; ++j) sq_dist_(i, j) = sq_dist_(i + 1, j + 1);
  sq_dist_(m - 1, m - 1) = 0.0;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m - 1; ++i) {
    const double s = sq_dist_between(window_[static_cast<size_t>(i)],
                                     window_.back());
    sq_dist_(i, m - 1) = s;
    sq_dist_(m - 1, i) = s;
  }
}

namespace {

struct WindowBackground {
  Matrix bg;
  Matrix bg_norm;
};

// Projects every hyper-pixel onto the leading basis vector of the window's
// coordinate-vector model (the frame-vector graph).
WindowBackground background_from_window(const std::vector<Vector>& window,
                                        int rows, int cols,
                                        const Matrix& sq_dist,
                                        const EpsilonSpec& epsilon,
                                        double delta, EmbeddingKind variant) {
  const int m = static_cast<int>(window.size());
  const double eps = resolve_epsilon(sq_dist, epsilon, rows * cols);
  const Matrix W = gaussian_affinity(sq_dist, eps);
  const SpectralRoute route = variant == EmbeddingKind::DB
                                  ? SpectralRoute::direct
                                  : SpectralRoute::symmetric;
  const SpectralModel model = build_spectral_model(W, 1, delta, route);
  const Vector lead = variant == EmbeddingKind::DB ? model.nu.col(0)
                                                   : model.theta.col(0);

  WindowBackground out;
  out.bg.resize(rows, cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Eigen::Index p = static_cast<Eigen::Index>(i) * cols + j;
      double s = 0.0;
      for (int t = 0; t < m; ++t)
        s += window[static_cast<size_t>(t)](p) * lead(t);
      out.bg(i, j) = s;
    }
  }
  out.bg_norm = normalize_0_255(out.bg);
  return out;
}

Matrix subtract_clamped(const Matrix& frame, const Matrix& bg) {
  return (frame - bg).cwiseMax(0.0);
}

} // namespace

BackgroundModel capture_static_background(const std::vector<Matrix>& window,
                                          const EpsilonSpec& epsilon,
                                          double delta, EmbeddingKind variant) {
  if (window.size() < 2)
    throw Error("InvalidInput", "background window needs at least 2 frames");
  SlidingWindowKernel kernel(window, 0, static_cast<int>(window.size()));
  std::vector<Vector> vectors;
  vectors.reserve(window.size());
  for (const Matrix& f : window) vectors.push_back(frame_vector(f));

  const WindowBackground wb = background_from_window(
      vectors, static_cast<int>(window[0].rows()),
      static_cast<int>(window[0].cols()), kernel.sq_dist(), epsilon, delta,
      variant);
  BackgroundModel out;
  out.bg = wb.bg;
  out.bg_norm = wb.bg_norm;
  out.window_lo = 0;
  out.window_hi = static_cast<int>(window.size()) - 1;
  return out;
}

std::vector<Matrix> sbsdb_backgrounds(const std::vector<Matrix>& frames,
                                      const SbsdbOptions& options) {
  const int n = static_cast<int>(frames.size());
  const int m = options.window;
  if (m < 2) throw Error("InvalidInput", "window must be >= 2");
  if (m > n) throw WindowTooLarge(m, n);
  const int rows = static_cast<int>(frames[0].rows());
  const int cols = static_cast<int>(frames[0].cols());

  std::vector<Matrix> backgrounds(static_cast<size_t>(n));
  SlidingWindowKernel kernel(frames, 0, m);
  std::vector<Vector> window;
  window.reserve(static_cast<size_t>(m));
  for (int t = 0; t < m; ++t)
    window.push_back(frame_vector(frames[static_cast<size_t>(t)]));

  for (int i = 0; i + m <= n; ++i) {
    if (i > 0) {
      kernel.slide(frames[static_cast<size_t>(i + m - 1)]);
      window.erase(window.begin());
      window.push_back(frame_vector(frames[static_cast<size_t>(i + m - 1)]));
    }
    backgrounds[static_cast<size_t>(i)] =
        background_from_window(window, rows, cols, kernel.sq_dist(),
                               options.epsilon, options.delta, options.variant)
            .bg_norm;
  }
  // Tail frames reuse the last computed window's background.
  for (int i = n - m + 1; i < n; ++i)
    backgrounds[static_cast<size_t>(i)] =
        backgrounds[static_cast<size_t>(n - m)];
  return backgrounds;
}

std::vector<Matrix> sbsdb_subtract(const std::vector<Matrix>& frames,
                                   const SbsdbOptions& options) {
  const std::vector<Matrix> backgrounds = sbsdb_backgrounds(frames, options);
  std::vector<Matrix> out(frames.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(frames.size()); ++t)
    out[static_cast<size_t>(t)] =
        subtract_clamped(frames[static_cast<size_t>(t)],
                         backgrounds[static_cast<size_t>(t)]);
  return out;
}

std::array<double, 256> histogram256(const Matrix& frame) {
  std::array<double, 256> h{};
  for (Eigen::Index i = 0; i < frame.rows(); ++i)
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
      int bin = static_cast<int>(std::floor(frame(i, j)));
      bin = std::clamp(bin, 0, 255);
      h[static_cast<size_t>(bin)] += 1.0;
    }
  return h;
}

std::vector<double> smooth_histogram(const std::array<double, 256>& h,
                                     int width) {
  if (width < 1 || width % 2 == 0)
    throw Error("InvalidInput", "smoothing width must be odd and positive");
  const int half = width / 2;
  std::vector<double> out(256, 0.0);
  for (int x = 0; x < 256; ++x) {
    const int lo = std::max(0, x - half);
    const int hi = std::min(255, x + half);
    double s = 0.0;
    for (int k = lo; k <= hi; ++k) s += h[static_cast<size_t>(k)];
    out[static_cast<size_t>(x)] = s / (hi - lo + 1);
  }
  return out;
}

double resolve_mu(const std::vector<double>& smoothed, double mu) {
  if (mu > 0.0) return mu;
  const double peak = *std::max_element(smoothed.begin(), smoothed.end());
  return 0.005 * peak;
}

namespace {

int argmax_bin(const std::vector<double>& h) {
  return static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
}

// Central difference with clamped ends.
double slope_at(const std::vector<double>& h, int x) {
  const int lo = std::max(0, x - 1);
  const int hi = std::min(255, x + 1);
  return (h[static_cast<size_t>(hi)] - h[static_cast<size_t>(lo)]) / 2.0;
}

} // namespace

GrayThreshold gray_threshold(const std::vector<double>& smoothed, double mu) {
  const int peak = argmax_bin(smoothed);
  for (int x = peak + 1; x < 256; ++x)
    if (std::abs(slope_at(smoothed, x)) < mu) return {x, false};
  return {255, true};
}

RgbThresholds rgb_threshold(const std::vector<double>& smoothed, double mu) {
  const int peak = argmax_bin(smoothed);
  RgbThresholds out;
  out.lo = -1;
  for (int y = peak - 1; y >= 0; --y)
    if (slope_at(smoothed, y) < mu) {
      out.lo = y;
      break;
    }
  out.hi = 256;
  for (int x = peak + 1; x < 256; ++x)
    if (slope_at(smoothed, x) > -mu) {
      out.hi = x;
      break;
    }
  return out;
}

std::vector<Mask> sbsdb(const std::vector<Matrix>& frames,
                        const SbsdbOptions& options) {
  const std::vector<Matrix> subtracted = sbsdb_subtract(frames, options);
  std::vector<Mask> masks(frames.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(frames.size()); ++t) {
    const Matrix& s = subtracted[static_cast<size_t>(t)];
    const std::vector<double> h =
        smooth_histogram(histogram256(s), options.thr.smoothing_width);
    const double mu = resolve_mu(h, options.thr.mu);
    const int th = gray_threshold(h, mu).th;
    Mask mask(s.rows(), s.cols());
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        mask(i, j) = s(i, j) >= th ? 1 : 0;
    masks[static_cast<size_t>(t)] = std::move(mask);
  }
  return masks;
}

BackgroundModel capture_dynamic_background(const std::vector<Matrix>& bgd,
                                           double stop_fraction, int max_iters,
                                           const EpsilonSpec& epsilon,
                                           double delta) {
  if (bgd.size() < 2)
    throw Error("InvalidInput", "background capture needs at least 2 frames");
  if (stop_fraction <= 0.0 || stop_fraction > 1.0)
    throw Error("InvalidInput", "stop_fraction must be in (0, 1]");

  std::vector<Matrix> current = bgd;
  const long total = static_cast<long>(current.size()) * bgd[0].size();

  BackgroundModel out;
  out.bg = Matrix::Zero(bgd[0].rows(), bgd[0].cols());
  out.converged = false;
  out.iterations = 0;

  for (int iter = 1; iter <= max_iters; ++iter) {
    out.iterations = iter;
    const BackgroundModel step =
        capture_static_background(current, epsilon, delta);
    out.bg += step.bg;

    long nonpositive = 0;
#pragma omp parallel for schedule(static) reduction(+ : nonpositive)
    for (long t = 0; t < static_cast<long>(current.size()); ++t) {
      Matrix& f = current[static_cast<size_t>(t)];
      f = subtract_clamped(f, step.bg_norm);
      for (Eigen::Index i = 0; i < f.rows(); ++i)
        for (Eigen::Index j = 0; j < f.cols(); ++j)
          if (f(i, j) <= 0.0) ++nonpositive;
    }
    if (static_cast<double>(nonpositive) >= stop_fraction * total) {
      out.converged = true;
      break;
    }
  }
  out.bg_norm = normalize_0_255(out.bg);
  return out;
}

Mask dfs_combine(const Mask& gray, const Mask& rgb) {
  if (gray.rows() != rgb.rows() || gray.cols() != rgb.cols())
    throw Error("InvalidInput", "mask shapes differ");
  const int rows = static_cast<int>(rgb.rows());
  const int cols = static_cast<int>(rgb.cols());
  Mask out = Mask::Zero(rows, cols);

  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (gray(i, j) == 0 || rgb(i, j) == 0 || out(i, j) != 0) continue;
      // Root found: flood its 8-connected rgb component.
      stack.emplace_back(i, j);
      out(i, j) = 1;
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = r + dr;
            const int nc = c + dc;
            if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
            if (rgb(nr, nc) != 0 && out(nr, nc) == 0) {
              out(nr, nc) = 1;
              stack.emplace_back(nr, nc);
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<Mask> dbsdb(const FrameSequence& rtd, const FrameSequence& bgd,
                        const DbsdbOptions& options) {
  check_sequence(rtd);
  check_sequence(bgd);
  if (rtd.channels != 3 || bgd.channels != 3)
    throw Error("InvalidInput", "dbsdb expects RGB sequences");
  if (rtd.rows != bgd.rows || rtd.cols != bgd.cols)
    throw Error("InvalidInput", "rtd/bgd frame shapes differ");

  const SbsdbOptions& sb = options.sbsdb;

  // Step 1: grayscale training. A sliding-window background pass over the
  // grayscale training data (no thresholding), then the iterative capture.
  const std::vector<Matrix> bgd_gray_sub =
      sbsdb_subtract(gray_planes(gray_view(bgd)), sb);
  const BackgroundModel train_gray = capture_dynamic_background(
      bgd_gray_sub, options.stop_fraction, options.max_iters, sb.epsilon,
      sb.delta);

  // Step 2: RGB training, per channel.
  std::array<BackgroundModel, 3> train_rgb;
  for (int c = 0; c < 3; ++c) {
    std::vector<Matrix> channel;
    channel.reserve(bgd.frames.size());
    for (const auto& f : bgd.frames) channel.push_back(f[static_cast<size_t>(c)]);
    train_rgb[static_cast<size_t>(c)] = capture_dynamic_background(
        channel, options.stop_fraction, options.max_iters, sb.epsilon,
        sb.delta);
  }

  // Step 3 prelude: sliding-window pass over the grayscale classification
  // data, again without thresholding.
  const std::vector<Matrix> rtd_gray_sub =
      sbsdb_subtract(gray_planes(gray_view(rtd)), sb);

  const int n = rtd.size();
  std::vector<Mask> masks(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < n; ++t) {
    // Step 3: grayscale classification.
    const Matrix sg = subtract_clamped(rtd_gray_sub[static_cast<size_t>(t)],
                                       train_gray.bg_norm);
    const std::vector<double> hg =
        smooth_histogram(histogram256(sg), sb.thr.smoothing_width);
    const int th = gray_threshold(hg, resolve_mu(hg, sb.thr.mu)).th;
    Mask gray_mask(rtd.rows, rtd.cols);
    for (int i = 0; i < rtd.rows; ++i)
      for (int j = 0; j < rtd.cols; ++j)
        gray_mask(i, j) = sg(i, j) >= th ? 1 : 0;

    // Step 4: RGB classification, channel masks merged by OR.
    Mask rgb_mask = Mask::Zero(rtd.rows, rtd.cols);
    for (int c = 0; c < 3; ++c) {
      const Matrix diff = rtd.frames[static_cast<size_t>(t)][static_cast<size_t>(c)] -
                          train_rgb[static_cast<size_t>(c)].bg_norm;
      const Matrix norm = normalize_0_255(diff);
      const std::vector<double> hc =
          smooth_histogram(histogram256(norm), sb.thr.smoothing_width);
      const RgbThresholds bounds = rgb_threshold(hc, resolve_mu(hc, sb.thr.mu));
      for (int i = 0; i < rtd.rows; ++i)
        for (int j = 0; j < rtd.cols; ++j) {
          const double v = norm(i, j);
          const bool background = v > bounds.lo && v < bounds.hi;
          if (!background) rgb_mask(i, j) = 1;
        }
    }

    // Step 5: keep rgb components seeded by gray foreground.
    masks[static_cast<size_t>(t)] = dfs_combine(gray_mask, rgb_mask);
  }
  return masks;
}

} // namespace diffuse
