#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>

#include "ortholoc/image.hpp"

namespace ortholoc {

/// Colorized 2.5D elevation grid: each cell is either empty or carries a
/// surface height plus an RGB color. Heights are stored as a dense matrix
/// with NaN marking empty cells.
class ElevationGrid {
 public:
  using HeightMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using ColorPlane = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  ElevationGrid(int cols, int rows, double cell_size);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell_size() const { return cell_size_; }

  bool has_cell(int col, int row) const;
  void set_cell(int col, int row, double height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void clear_cell(int col, int row);

  double height(int col, int row) const { return heights_(row, col); }
  std::array<std::uint8_t, 3> color(int col, int row) const;

  int occupied_count() const;

 private:
  int cols_;
  int rows_;
  double cell_size_;
  HeightMatrix heights_;
  std::array<ColorPlane, 3> colors_;
};

/// Orthographic top-down rendering of the grid at the requested resolution:
/// each output pixel takes the color of the cell covering its center (nearest
/// cell, no interpolation). Pixels over empty cells come out invalid with
/// value 0. Output size is ceil(cols * cell_size / resolution) x
/// ceil(rows * cell_size / resolution). Throws if every cell is empty.
OrthoMap render_orthomosaic(const ElevationGrid& grid, double resolution);

/// CSV exchange format: header `col,row,height,r,g,b`, one line per occupied
/// cell, empty cells omitted. The grid extent is inferred from the largest
/// indices present; the cell size is supplied by the caller.
ElevationGrid load_elevation_csv(const std::string& path, double cell_size);
void save_elevation_csv(const ElevationGrid& grid, const std::string& path);

}  // namespace ortholoc
