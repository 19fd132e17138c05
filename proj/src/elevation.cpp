#include "ortholoc/elevation.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ortholoc {

namespace {
constexpr double kEmpty = std::numeric_limits<double>::quiet_NaN();
}

ElevationGrid::ElevationGrid(int cols, int rows, double cell_size)
    : cols_(cols), rows_(rows), cell_size_(cell_size) {
  if (cols < 1 || rows < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be > 0");
  heights_ = HeightMatrix::Constant(rows, cols, kEmpty);
  for (auto& p : colors_) p = ColorPlane::Zero(rows, cols);
}

bool ElevationGrid::has_cell(int col, int row) const {
  return std::isfinite(heights_(row, col));
}

void ElevationGrid::set_cell(int col, int row, double height, std::uint8_t r, std::uint8_t g,
                             std::uint8_t b) {
  if (!std::isfinite(height)) throw std::invalid_argument("cell height must be finite");
  heights_(row, col) = height;
  colors_[0](row, col) = r;
  colors_[1](row, col) = g;
  colors_[2](row, col) = b;
}

void ElevationGrid::clear_cell(int col, int row) {
  heights_(row, col) = kEmpty;
  for (auto& p : colors_) p(row, col) = 0;
}

std::array<std::uint8_t, 3> ElevationGrid::color(int col, int row) const {
  return {colors_[0](row, col), colors_[1](row, col), colors_[2](row, col)};
}

int ElevationGrid::occupied_count() const {
  int n = 0;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (has_cell(c, r)) ++n;
  return n;
}

OrthoMap render_orthomosaic(const ElevationGrid& grid, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
  if (grid.occupied_count() == 0) throw std::runtime_error("no surface to render");

  const int w = static_cast<int>(std::ceil(grid.cols() * grid.cell_size() / resolution));
  const int h = static_cast<int>(std::ceil(grid.rows() * grid.cell_size() / resolution));
  OrthoMap out = OrthoMap::rgb(w, h, resolution);
  out.ensure_mask();

  for (int v = 0; v < h; ++v) {
    const int row = std::min(grid.rows() - 1,
                             static_cast<int>(std::floor((v + 0.5) * resolution / grid.cell_size())));
    for (int u = 0; u < w; ++u) {
      const int col = std::min(
          grid.cols() - 1, static_cast<int>(std::floor((u + 0.5) * resolution / grid.cell_size())));
      if (!grid.has_cell(col, row)) {
        out.mask(v, u) = 0;
        continue;
      }
      const auto rgb = grid.color(col, row);
      for (int c = 0; c < 3; ++c) out.planes[c](v, u) = rgb[c];
    }
  }
  return out;
}

ElevationGrid load_elevation_csv(const std::string& path, double cell_size) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open elevation csv: " + path);

  std::string line;
  if (!std::getline(in, line) || line.rfind("col,row,height,r,g,b", 0) != 0)
    throw std::runtime_error("malformed elevation csv header: " + path);

  struct Entry {
    int col, row;
    double height;
    int r, g, b;
  };
  std::vector<Entry> entries;
  int max_col = 0, max_row = 0;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    Entry e;
    char c1, c2, c3, c4, c5;
    if (!(ss >> e.col >> c1 >> e.row >> c2 >> e.height >> c3 >> e.r >> c4 >> e.g >> c5 >> e.b) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',')
      throw std::runtime_error("malformed elevation csv at line " + std::to_string(line_no));
    if (e.col < 0 || e.row < 0 || e.r < 0 || e.r > 255 || e.g < 0 || e.g > 255 || e.b < 0 ||
        e.b > 255)
      throw std::runtime_error("elevation csv value out of range at line " + std::to_string(line_no));
    max_col = std::max(max_col, e.col);
    max_row = std::max(max_row, e.row);
    entries.push_back(e);
  }
  if (entries.empty()) throw std::runtime_error("elevation csv has no cells: " + path);

  ElevationGrid grid(max_col + 1, max_row + 1, cell_size);
  for (const Entry& e : entries)
    grid.set_cell(e.col, e.row, e.height, static_cast<std::uint8_t>(e.r),
                  static_cast<std::uint8_t>(e.g), static_cast<std::uint8_t>(e.b));
  return grid;
}

void save_elevation_csv(const ElevationGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write elevation csv: " + path);
  out << "col,row,height,r,g,b\n";
  char buf[128];
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c)
      if (grid.has_cell(c, r)) {
        const auto rgb = grid.color(c, r);
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%d,%d,%d\n", c, r, grid.height(c, r), rgb[0],
                      rgb[1], rgb[2]);
        out << buf;
      }
  if (!out) throw std::runtime_error("cannot write elevation csv: " + path);
}

}  // namespace ortholoc
