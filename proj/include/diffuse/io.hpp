#pragma once

#include "diffuse/cube.hpp"
#include "diffuse/epsilon.hpp"
#include "diffuse/segment.hpp"
#include "diffuse/video.hpp"

#include <string>

namespace diffuse {

// Hyper-cube files: raw little-endian float32, band-sequential (band
// slowest, then row-major), plus a JSON sidecar
// {"rows":R,"cols":C,"bands":L,"dtype":"f32","order":"bsq"}.
void save_cube(const HyperCube& cube, const std::string& header_path,
               const std::string& data_path);
HyperCube load_cube(const std::string& header_path,
                    const std::string& data_path);

// Matrix CSV: header row "c0,c1,...", row-major, 17 significant digits.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

// Scale-scan CSV with columns log_eps,log_S,slope.
void write_epsilon_scan_csv(const std::string& path, const EpsilonScan& scan);

// Binary PGM (P5) / PPM (P6), maxval 255.
void write_pgm(const std::string& path, const Matrix& image); // clamps to [0,255]
void write_mask_pgm(const std::string& path, const Mask& mask); // 0 / 255
Matrix read_pgm(const std::string& path);
std::array<Matrix, 3> read_ppm(const std::string& path);
void write_ppm(const std::string& path, const std::array<Matrix, 3>& rgb);

/// Numbered .pgm/.ppm frames from a directory (sorted by the numeric part
/// of the file name), or a cube header (.json) whose bands become frames.
FrameSequence read_frames(const std::string& path);

// Segmentation output: a PPM rendering through the palette plus a CSV
// "label,count,peak_color" where the peak tuple is ';'-separated.
void write_segmentation(const std::string& ppm_path,
                        const std::string& csv_path,
                        const SegmentationMap& seg);
struct SegmentationRow {
  int label = 0;
  long count = 0;
  ColorTuple peak;
};
std::vector<SegmentationRow> read_segmentation_csv(const std::string& path);

} // namespace diffuse
