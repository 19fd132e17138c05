#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ortholoc/types.hpp"

namespace ortholoc {

enum class Channels { kGray = 1, kRgb = 3 };

/// Georeferenced top-down pixel grid (orthomosaic map).
///
/// Pixels live in [0, 255] and are stored per channel as row-major Eigen
/// matrices indexed (v, u) = (row, col). An empty mask means "all pixels
/// valid"; otherwise the mask holds 255 for valid and 0 for invalid pixels.
/// The world point of pixel center (u, v) is
///   (origin_x + resolution * u, origin_y + resolution * v),
/// with world y growing along image rows. Maps are treated as immutable
/// values: every operation below returns a new map.
template <typename Scalar>
struct OrthoMapT {
  using Plane = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Mask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<Plane> planes;  // 1 plane (gray) or 3 planes (rgb)
  Mask mask;                  // empty or height x width
  double resolution = 0.1;    // meters per pixel
  double origin_x = 0.0;      // world coordinates of pixel (0, 0)
  double origin_y = 0.0;

  static OrthoMapT gray(int width, int height, Scalar fill = Scalar(0), double res = 0.1) {
    OrthoMapT m;
    m.planes.push_back(Plane::Constant(height, width, fill));
    m.resolution = res;
    return m;
  }

  static OrthoMapT rgb(int width, int height, double res = 0.1) {
    OrthoMapT m;
    for (int c = 0; c < 3; ++c) m.planes.push_back(Plane::Zero(height, width));
    m.resolution = res;
    return m;
  }

  int width() const { return planes.empty() ? 0 : static_cast<int>(planes[0].cols()); }
  int height() const { return planes.empty() ? 0 : static_cast<int>(planes[0].rows()); }
  Channels channels() const { return planes.size() == 3 ? Channels::kRgb : Channels::kGray; }
  bool is_gray() const { return planes.size() == 1; }
  bool has_mask() const { return mask.size() > 0; }

  Scalar value(int u, int v, int c = 0) const { return planes[c](v, u); }
  Scalar& value(int u, int v, int c = 0) { return planes[c](v, u); }

  bool valid(int u, int v) const { return !has_mask() || mask(v, u) != 0; }

  /// Allocates an all-valid mask if none is present.
  void ensure_mask() {
    if (!has_mask()) mask = Mask::Constant(height(), width(), 255);
  }

  void set_valid(int u, int v, bool ok) {
    ensure_mask();
    mask(v, u) = ok ? 255 : 0;
  }

  /// Fraction of valid pixels (1.0 for maskless maps).
  double valid_fraction() const {
    if (!has_mask()) return 1.0;
    return mask.template cast<double>().sum() / (255.0 * mask.size());
  }

  /// Checks the structural invariants; throws std::invalid_argument on violation.
  void validate() const {
    if (planes.empty()) throw std::invalid_argument("map has no pixel data");
    if (planes.size() != 1 && planes.size() != 3)
      throw std::invalid_argument("map must have 1 or 3 channels");
    if (width() < 1 || height() < 1) throw std::invalid_argument("map dimensions must be >= 1");
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
    for (const Plane& p : planes) {
      if (p.rows() != height() || p.cols() != width())
        throw std::invalid_argument("channel dimensions disagree");
      if (!p.allFinite() || p.minCoeff() < Scalar(0) || p.maxCoeff() > Scalar(255))
        throw std::invalid_argument("pixel values must lie in [0, 255]");
    }
    if (has_mask() && (mask.rows() != height() || mask.cols() != width()))
      throw std::invalid_argument("mask dimensions disagree");
  }
};

using OrthoMap = OrthoMapT<double>;

/// Converts an RGB map to single-channel intensity with fixed luminance
/// weights, luminance = round(0.299 R + 0.587 G + 0.114 B). Grayscale input
/// is returned unchanged; the mask is preserved either way.
template <typename Scalar>
OrthoMapT<Scalar> to_grayscale(const OrthoMapT<Scalar>& map) {
  if (map.is_gray()) return map;
  OrthoMapT<Scalar> out;
  typename OrthoMapT<Scalar>::Plane lum =
      (0.299 * map.planes[0].template cast<double>() +
       0.587 * map.planes[1].template cast<double>() +
       0.114 * map.planes[2].template cast<double>())
          .unaryExpr([](double x) { return std::round(x); })
          .template cast<Scalar>();
  out.planes.push_back(std::move(lum));
  out.mask = map.mask;
  out.resolution = map.resolution;
  out.origin_x = map.origin_x;
  out.origin_y = map.origin_y;
  return out;
}

/// Extracts the w x h sub-map whose upper-left pixel is (u, v), carrying the
/// mask region along. The origin shifts so world coordinates are preserved.
template <typename Scalar>
OrthoMapT<Scalar> crop_window(const OrthoMapT<Scalar>& map, int u, int v, int w, int h) {
  if (w < 1 || h < 1 || u < 0 || v < 0 || u + w > map.width() || v + h > map.height())
    throw std::out_of_range("window out of bounds");
  OrthoMapT<Scalar> out;
  for (const auto& p : map.planes) out.planes.push_back(p.block(v, u, h, w));
  if (map.has_mask()) out.mask = map.mask.block(v, u, h, w);
  out.resolution = map.resolution;
  out.origin_x = map.origin_x + map.resolution * u;
  out.origin_y = map.origin_y + map.resolution * v;
  return out;
}

/// Rotates a map by `angle` radians about its geometric center using
/// nearest-neighbor sampling. Destination pixels whose source falls outside
/// the frame come out invalid, with the mean of the valid input pixels as a
/// neutral fill value so mask-free statistics stay representative of the
/// scene. Invalid source pixels keep their stored value and stay invalid.
/// angle = 0 reproduces the input exactly.
template <typename Scalar>
OrthoMapT<Scalar> rotate_nn(const OrthoMapT<Scalar>& map, double angle) {
  using Plane = typename OrthoMapT<Scalar>::Plane;
  using Mask = typename OrthoMapT<Scalar>::Mask;
  const int w = map.width();
  const int h = map.height();
  const double cu = 0.5 * (w - 1);
  const double cv = 0.5 * (h - 1);
  // inverse mapping: source = center + R(-angle) * (dest - center)
  const double c = std::cos(angle);
  const double s = std::sin(angle);

  std::vector<Scalar> fill(map.planes.size(), Scalar(0));
  for (size_t ch = 0; ch < map.planes.size(); ++ch) {
    double sum = 0.0;
    long count = 0;
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u) {
        if (map.has_mask() && map.mask(v, u) == 0) continue;
        sum += static_cast<double>(map.planes[ch](v, u));
        ++count;
      }
    if (count > 0) fill[ch] = static_cast<Scalar>(sum / count);
  }

  OrthoMapT<Scalar> out;
  for (size_t i = 0; i < map.planes.size(); ++i)
    out.planes.push_back(Plane::Constant(h, w, fill[i]));
  out.resolution = map.resolution;
  out.origin_x = map.origin_x;
  out.origin_y = map.origin_y;
  if (map.has_mask()) out.mask = Mask::Zero(h, w);

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double du = u - cu;
      const double dv = v - cv;
      const long su = std::llround(cu + c * du + s * dv);
      const long sv = std::llround(cv - s * du + c * dv);
      if (su < 0 || su >= w || sv < 0 || sv >= h) {
        if (!out.has_mask()) out.mask = Mask::Constant(h, w, 255);
        out.mask(v, u) = 0;
        continue;
      }
      for (size_t ch = 0; ch < map.planes.size(); ++ch)
        out.planes[ch](v, u) = map.planes[ch](sv, su);
      if (map.has_mask()) out.mask(v, u) = map.mask(sv, su);
    }
  }
  return out;
}

/// Continuous pixel coordinates of a world point.
template <typename Scalar>
std::pair<double, double> world_to_pixel(const OrthoMapT<Scalar>& map, double x, double y) {
  return {(x - map.origin_x) / map.resolution, (y - map.origin_y) / map.resolution};
}

/// Upper-left pixel of the m x n window centered (in the geometric sense) on
/// the given world position. May fall outside the map; callers bounds-check.
template <typename Scalar>
std::pair<long, long> window_origin_for_pose(const OrthoMapT<Scalar>& map, const Pose2D& pose,
                                             int m, int n) {
  const auto [cu, cv] = world_to_pixel(map, pose.x, pose.y);
  return {std::llround(cu - 0.5 * (m - 1)), std::llround(cv - 0.5 * (n - 1))};
}

}  // namespace ortholoc
