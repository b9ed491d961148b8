#include "diffuse/io.hpp"

#include "diffuse/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace diffuse {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

// All binary payloads are little-endian; this code assumes a little-endian
// host (x86/ARM in practice).
void write_f32(std::ofstream& out, const std::vector<float>& data) {
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void save_cube(const HyperCube& cube, const std::string& header_path,
               const std::string& data_path) {
  check_cube(cube);
  nlohmann::json header = {{"rows", cube.rows},
                           {"cols", cube.cols},
                           {"bands", cube.bands()},
                           {"dtype", "f32"},
                           {"order", "bsq"}};
  {
    std::ofstream out = open_out(header_path);
    out << header.dump(2) << "\n";
  }
  std::ofstream out = open_out(data_path);
  std::vector<float> plane(static_cast<size_t>(cube.pixel_count()));
  for (int k = 0; k < cube.bands(); ++k) {
    const Matrix& band = cube.band_images[static_cast<size_t>(k)];
    size_t p = 0;
    for (int i = 0; i < cube.rows; ++i)
      for (int j = 0; j < cube.cols; ++j)
        plane[p++] = static_cast<float>(band(i, j));
    write_f32(out, plane);
  }
}

HyperCube load_cube(const std::string& header_path,
                    const std::string& data_path) {
  nlohmann::json header;
  try {
    std::ifstream in = open_in(header_path);
    in >> header;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw HeaderMismatch(std::string("cannot parse header: ") + e.what());
  }

  long rows = 0, cols = 0, bands = 0;
  try {
    rows = header.at("rows").get<long>();
    cols = header.at("cols").get<long>();
    bands = header.at("bands").get<long>();
    if (header.at("dtype").get<std::string>() != "f32" ||
        header.at("order").get<std::string>() != "bsq")
      throw HeaderMismatch("unsupported dtype/order");
  } catch (const HeaderMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw HeaderMismatch(std::string("bad header field: ") + e.what());
  }
  if (rows < 1 || cols < 1 || bands < 1)
    throw HeaderMismatch("non-positive dimensions");
  constexpr long kMaxElements = 1L << 40;
  if (rows > kMaxElements / cols || rows * cols > kMaxElements / bands)
    throw HeaderMismatch("dimensions overflow");

  const std::uintmax_t expected =
      static_cast<std::uintmax_t>(rows) * cols * bands * sizeof(float);
  std::error_code ec;
  const std::uintmax_t actual = std::filesystem::file_size(data_path, ec);
  if (ec) throw IoError("cannot stat " + data_path);
  if (actual != expected)
    throw SizeMismatch("data file " + data_path + " holds " +
                       std::to_string(actual) + " bytes, expected " +
                       std::to_string(expected));

  std::ifstream in = open_in(data_path);
  HyperCube cube;
  cube.rows = static_cast<int>(rows);
  cube.cols = static_cast<int>(cols);
  cube.band_images.assign(static_cast<size_t>(bands), Matrix(rows, cols));
  std::vector<float> plane(static_cast<size_t>(rows * cols));
  for (long k = 0; k < bands; ++k) {
    in.read(reinterpret_cast<char*>(plane.data()),
            static_cast<std::streamsize>(plane.size() * sizeof(float)));
    if (!in) throw SizeMismatch("short read from " + data_path);
    size_t p = 0;
    Matrix& band = cube.band_images[static_cast<size_t>(k)];
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) band(i, j) = plane[p++];
  }
  return cube;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    out << (c ? "," : "") << "c" << c;
  out << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV " + path);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows[0].size())
      throw IoError("ragged CSV " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV has no data rows: " + path);

  Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
  return m;
}

void write_epsilon_scan_csv(const std::string& path, const EpsilonScan& scan) {
  std::ofstream out = open_out(path);
  out << "log_eps,log_S,slope\n";
  for (Eigen::Index i = 0; i < scan.log_eps.size(); ++i)
    out << format_double(scan.log_eps(i)) << ","
        << format_double(scan.log_S(i)) << "," << format_double(scan.slope(i))
        << "\n";
}

namespace {

void write_pnm_header(std::ofstream& out, const char* magic, long rows,
                      long cols) {
  out << magic << "\n" << cols << " " << rows << "\n255\n";
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
}

struct PnmHeader {
  std::string magic;
  long rows = 0, cols = 0, maxval = 0;
};

PnmHeader read_pnm_header(std::ifstream& in, const std::string& path) {
  PnmHeader h;
  // Token reader that skips '#' comments, per the PNM conventions.
  auto next_token = [&]() -> std::string {
    std::string tok;
    char ch;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(ch);
    }
    return tok;
  };
  h.magic = next_token();
  if (h.magic != "P5" && h.magic != "P6")
    throw BadMagic("not a binary PGM/PPM: " + path);
  try {
    h.cols = std::stol(next_token());
    h.rows = std::stol(next_token());
    h.maxval = std::stol(next_token());
  } catch (const std::exception&) {
    throw BadMagic("malformed PNM header: " + path);
  }
  if (h.rows < 1 || h.cols < 1 || h.maxval != 255)
    throw BadMagic("unsupported PNM geometry in " + path);
  return h;
}

} // namespace

void write_pgm(const std::string& path, const Matrix& image) {
  std::ofstream out = open_out(path);
  write_pnm_header(out, "P5", image.rows(), image.cols());
  std::vector<std::uint8_t> row(static_cast<size_t>(image.cols()));
  for (Eigen::Index i = 0; i < image.rows(); ++i) {
    for (Eigen::Index j = 0; j < image.cols(); ++j)
      row[static_cast<size_t>(j)] = to_byte(image(i, j));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
}

void write_mask_pgm(const std::string& path, const Mask& mask) {
  Matrix image(mask.rows(), mask.cols());
  for (Eigen::Index i = 0; i < mask.rows(); ++i)
    for (Eigen::Index j = 0; j < mask.cols(); ++j)
      image(i, j) = mask(i, j) != 0 ? 255.0 : 0.0;
  write_pgm(path, image);
}

Matrix read_pgm(const std::string& path) {
  std::ifstream in = open_in(path);
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P5") throw BadMagic("expected P5 in " + path);
  std::vector<std::uint8_t> data(static_cast<size_t>(h.rows * h.cols));
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!in) throw SizeMismatch("short PGM payload in " + path);
  Matrix m(h.rows, h.cols);
  for (long i = 0; i < h.rows; ++i)
    for (long j = 0; j < h.cols; ++j)
      m(i, j) = data[static_cast<size_t>(i * h.cols + j)];
  return m;
}

void write_ppm(const std::string& path, const std::array<Matrix, 3>& rgb) {
  std::ofstream out = open_out(path);
  write_pnm_header(out, "P6", rgb[0].rows(), rgb[0].cols());
  std::vector<std::uint8_t> row(static_cast<size_t>(rgb[0].cols()) * 3);
  for (Eigen::Index i = 0; i < rgb[0].rows(); ++i) {
    for (Eigen::Index j = 0; j < rgb[0].cols(); ++j)
      for (int c = 0; c < 3; ++c)
        row[static_cast<size_t>(j) * 3 + static_cast<size_t>(c)] =
            to_byte(rgb[static_cast<size_t>(c)](i, j));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
}

std::array<Matrix, 3> read_ppm(const std::string& path) {
  std::ifstream in = open_in(path);
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P6") throw BadMagic("expected P6 in " + path);
  std::vector<std::uint8_t> data(static_cast<size_t>(h.rows * h.cols) * 3);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!in) throw SizeMismatch("short PPM payload in " + path);
  std::array<Matrix, 3> rgb{Matrix(h.rows, h.cols), Matrix(h.rows, h.cols),
                            Matrix(h.rows, h.cols)};
  for (long i = 0; i < h.rows; ++i)
    for (long j = 0; j < h.cols; ++j)
      for (int c = 0; c < 3; ++c)
        rgb[static_cast<size_t>(c)](i, j) =
            data[static_cast<size_t>((i * h.cols + j) * 3 + c)];
  return rgb;
}

FrameSequence read_frames(const std::string& path) {
  namespace fs = std::filesystem;

  if (!fs::is_directory(path)) {
    // Cube header: bands become frames.
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
      std::string data = path.substr(0, path.size() - 5) + ".f32";
      const HyperCube cube = load_cube(path, data);
      FrameSequence seq;
      seq.rows = cube.rows;
      seq.cols = cube.cols;
      seq.channels = 1;
      for (const Matrix& band : cube.band_images) seq.frames.push_back({band});
      return seq;
    }
    throw IoError("frame input must be a directory or a cube header: " + path);
  }

  std::vector<std::pair<long, fs::path>> entries;
  for (const auto& entry : fs::directory_iterator(path)) {
    const std::string ext = entry.path().extension().string();
    if (ext != ".pgm" && ext != ".ppm") continue;
    const std::string stem = entry.path().stem().string();
    long number = 0;
    bool has_digit = false;
    for (char ch : stem)
      if (ch >= '0' && ch <= '9') {
        number = number * 10 + (ch - '0');
        has_digit = true;
      }
    entries.emplace_back(has_digit ? number : -1, entry.path());
  }
  if (entries.empty()) throw IoError("no .pgm/.ppm frames in " + path);
  std::sort(entries.begin(), entries.end());

  FrameSequence seq;
  for (const auto& [number, file] : entries) {
    if (file.extension() == ".pgm") {
      Matrix m = read_pgm(file.string());
      if (seq.frames.empty()) {
        seq.rows = static_cast<int>(m.rows());
        seq.cols = static_cast<int>(m.cols());
        seq.channels = 1;
      }
      seq.frames.push_back({std::move(m)});
    } else {
      std::array<Matrix, 3> rgb = read_ppm(file.string());
      if (seq.frames.empty()) {
        seq.rows = static_cast<int>(rgb[0].rows());
        seq.cols = static_cast<int>(rgb[0].cols());
        seq.channels = 3;
      }
      seq.frames.push_back(
          {std::move(rgb[0]), std::move(rgb[1]), std::move(rgb[2])});
    }
  }
  check_sequence(seq);
  return seq;
}

void write_segmentation(const std::string& ppm_path,
                        const std::string& csv_path,
                        const SegmentationMap& seg) {
  std::array<Matrix, 3> rgb{Matrix::Zero(seg.labels.rows(), seg.labels.cols()),
                            Matrix::Zero(seg.labels.rows(), seg.labels.cols()),
                            Matrix::Zero(seg.labels.rows(), seg.labels.cols())};
  for (Eigen::Index i = 0; i < seg.labels.rows(); ++i)
    for (Eigen::Index j = 0; j < seg.labels.cols(); ++j) {
      const int label = seg.labels(i, j);
      if (label < 1) continue; // outside pixels stay black
      const auto color = seg.palette[static_cast<size_t>(label - 1)];
      for (int c = 0; c < 3; ++c)
        rgb[static_cast<size_t>(c)](i, j) = color[static_cast<size_t>(c)];
    }
  write_ppm(ppm_path, rgb);

  std::vector<long> counts(seg.peaks.size(), 0);
  for (Eigen::Index i = 0; i < seg.labels.rows(); ++i)
    for (Eigen::Index j = 0; j < seg.labels.cols(); ++j)
      if (seg.labels(i, j) >= 1)
        ++counts[static_cast<size_t>(seg.labels(i, j) - 1)];

  std::ofstream out = open_out(csv_path);
  out << "label,count,peak_color\n";
  for (size_t k = 0; k < seg.peaks.size(); ++k) {
    out << (k + 1) << "," << counts[k] << ",";
    for (size_t m = 0; m < seg.peaks[k].color.size(); ++m)
      out << (m ? ";" : "") << seg.peaks[k].color[m];
    out << "\n";
  }
}

std::vector<SegmentationRow> read_segmentation_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV " + path);
  std::vector<SegmentationRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string label, count, peak;
    if (!std::getline(ss, label, ',') || !std::getline(ss, count, ',') ||
        !std::getline(ss, peak))
      throw IoError("malformed segmentation CSV row in " + path);
    SegmentationRow row;
    row.label = std::stoi(label);
    row.count = std::stol(count);
    std::stringstream ps(peak);
    std::string v;
    while (std::getline(ps, v, ';')) row.peak.push_back(std::stoi(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace diffuse
