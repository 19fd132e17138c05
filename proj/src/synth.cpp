#include "ortholoc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ortholoc/rng.hpp"

namespace ortholoc {
namespace {

constexpr double kDefaultResolution = 0.1;

/// Random lattice sampled bilinearly: smooth band-limited ground texture.
struct ValueNoise {
  int spacing;
  int gw, gh;
  std::vector<double> lattice;  // (gh) rows x (gw) cols, row-major

  ValueNoise(int width, int height, int spacing_px, SplitMix64& rng)
      : spacing(std::max(2, spacing_px)),
        gw(width / spacing + 2),
        gh(height / spacing + 2),
        lattice(static_cast<std::size_t>(gw) * gh) {
    for (double& v : lattice) v = rng.uniform01();
  }

  double at(double u, double v) const {
    const double x = u / spacing;
    const double y = v / spacing;
    const int x0 = std::min(static_cast<int>(x), gw - 2);
    const int y0 = std::min(static_cast<int>(y), gh - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    const double a = lattice[static_cast<std::size_t>(y0) * gw + x0];
    const double b = lattice[static_cast<std::size_t>(y0) * gw + x0 + 1];
    const double c = lattice[static_cast<std::size_t>(y0 + 1) * gw + x0];
    const double d = lattice[static_cast<std::size_t>(y0 + 1) * gw + x0 + 1];
    return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
  }
};

struct RoadSpec {
  double px, py;     // a point on the centerline, pixel units
  double dir_u, dir_v;
  double curvature;  // signed, 1/px; gentle arcs
  double half_width;
  double value;

  // centerline point and unit tangent at arc parameter t
  void at(double t, double& x, double& y, double& tu, double& tv) const {
    const double nu = -dir_v, nv = dir_u;
    x = px + t * dir_u + 0.5 * curvature * t * t * nu;
    y = py + t * dir_v + 0.5 * curvature * t * t * nv;
    tu = dir_u + curvature * t * nu;
    tv = dir_v + curvature * t * nv;
    const double norm = std::hypot(tu, tv);
    tu /= norm;
    tv /= norm;
  }
};

void stamp_disk(OrthoMap& map, double cx, double cy, double radius) {
  map.ensure_mask();
  const int u_lo = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int u_hi = std::min(map.width() - 1, static_cast<int>(std::ceil(cx + radius)));
  const int v_lo = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int v_hi = std::min(map.height() - 1, static_cast<int>(std::ceil(cy + radius)));
  for (int v = v_lo; v <= v_hi; ++v)
    for (int u = u_lo; u <= u_hi; ++u) {
      const double du = u - cx;
      const double dv = v - cy;
      if (du * du + dv * dv > radius * radius) continue;
      for (auto& plane : map.planes) plane(v, u) = 0.0;
      map.mask(v, u) = 0;
    }
}

void fill_disk(OrthoMap& map, double cx, double cy, double radius, double value) {
  const int u_lo = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int u_hi = std::min(map.width() - 1, static_cast<int>(std::ceil(cx + radius)));
  const int v_lo = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int v_hi = std::min(map.height() - 1, static_cast<int>(std::ceil(cy + radius)));
  for (int v = v_lo; v <= v_hi; ++v)
    for (int u = u_lo; u <= u_hi; ++u) {
      const double du = u - cx;
      const double dv = v - cy;
      if (du * du + dv * dv <= radius * radius) map.planes[0](v, u) = value;
    }
}

}  // namespace

DegradationParams DegradationParams::aerial_ground() {
  DegradationParams p;
  p.gain = 1.15;
  p.bias = -12.0;
  p.noise_sigma = 4.0;
  p.hollow_count = 5;
  p.hollow_radius_px = 6;
  p.edge_hollow_bias = 0.9;
  return p;
}

OrthoMap gen_global(const SceneSpec& spec) {
  if (spec.width_px < 64 || spec.height_px < 64)
    throw std::invalid_argument("scene dimensions must be at least 64x64");
  if (spec.road_count < 0) throw std::invalid_argument("road count must be >= 0");
  if (spec.marking_density < 0.0 || spec.marking_density > 1.0)
    throw std::invalid_argument("marking density must be in [0,1]");

  const int W = spec.width_px;
  const int H = spec.height_px;
  SplitMix64 rng(spec.seed);
  OrthoMap map = OrthoMap::gray(W, H, 0.0, kDefaultResolution);

  // Quiet bright ground speckled with small dark spots (stones, bushes) on a
  // jittered grid. The speckle keeps the deviation distribution sparse (flat
  // background plus strong compact features), which is what separates aligned
  // from misaligned placements under the absolute-value correlation scorers,
  // and the grid pitch guarantees structure near the center of any
  // template-sized window. Dense midtone noise would flatten the score field.
  const ValueNoise coarse(W, H, spec.texture_scale, rng);
  const ValueNoise fine(W, H, std::max(2, spec.texture_scale / 3), rng);
  for (int v = 0; v < H; ++v)
    for (int u = 0; u < W; ++u)
      map.planes[0](v, u) = 138.0 + 10.0 * (0.5 * coarse.at(u, v) + 0.5 * fine.at(u, v));

  const auto stamp_spot = [&map, W, H](double px, double py, double radius, double delta) {
    const int u_lo = std::max(0, static_cast<int>(std::floor(px - radius)));
    const int u_hi = std::min(W - 1, static_cast<int>(std::ceil(px + radius)));
    const int v_lo = std::max(0, static_cast<int>(std::floor(py - radius)));
    const int v_hi = std::min(H - 1, static_cast<int>(std::ceil(py + radius)));
    for (int v = v_lo; v <= v_hi; ++v)
      for (int u = u_lo; u <= u_hi; ++u) {
        const double du = u - px;
        const double dv = v - py;
        if (du * du + dv * dv <= radius * radius) map.planes[0](v, u) += delta;
      }
  };

  // Coarse layer: larger bushes and bare patches whose constellations make
  // template-sized windows unambiguous and survive rotation resampling.
  constexpr int kBlobCell = 28;
  for (int cy = 0; cy * kBlobCell < H; ++cy)
    for (int cx = 0; cx * kBlobCell < W; ++cx) {
      if (rng.uniform01() >= 0.4) continue;
      const double px = cx * kBlobCell + rng.uniform(4.0, kBlobCell - 4.0);
      const double py = cy * kBlobCell + rng.uniform(4.0, kBlobCell - 4.0);
      const double radius = rng.uniform(3.5, 7.0);
      const double delta = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(35.0, 60.0);
      stamp_spot(px, py, radius, delta);
    }

  // Fine layer: small stones for sub-meter registration accuracy.
  constexpr int kDotCell = 12;
  for (int cy = 0; cy * kDotCell < H; ++cy)
    for (int cx = 0; cx * kDotCell < W; ++cx) {
      if (rng.uniform01() >= 0.5) continue;
      const double px = cx * kDotCell + rng.uniform(2.0, kDotCell - 2.0);
      const double py = cy * kDotCell + rng.uniform(2.0, kDotCell - 2.0);
      stamp_spot(px, py, rng.uniform(2.0, 3.4), -rng.uniform(45.0, 80.0));
    }

  std::vector<RoadSpec> roads;
  roads.reserve(static_cast<std::size_t>(spec.road_count));
  for (int i = 0; i < spec.road_count; ++i) {
    RoadSpec r;
    const double phi = rng.uniform(0.0, std::numbers::pi);
    r.dir_u = std::cos(phi);
    r.dir_v = std::sin(phi);
    r.px = rng.uniform(0.2 * W, 0.8 * W);
    r.py = rng.uniform(0.2 * H, 0.8 * H);
    // Gentle arcs. A straight road is translation-invariant along its own
    // direction, which leaves sliding placements unresolved; curvature makes
    // every stretch geometrically unique.
    r.curvature = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.0015, 0.003);
    r.half_width = rng.uniform(12.0, 20.0);
    r.value = rng.uniform(35.0, 60.0);
    roads.push_back(r);
  }

  const double diag = std::hypot(static_cast<double>(W), static_cast<double>(H));
  const auto paint_band = [&map, &coarse, W, H](const RoadSpec& r, double cx, double cy,
                                                double radius) {
    const int u_lo = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int u_hi = std::min(W - 1, static_cast<int>(std::ceil(cx + radius)));
    const int v_lo = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int v_hi = std::min(H - 1, static_cast<int>(std::ceil(cy + radius)));
    for (int v = v_lo; v <= v_hi; ++v)
      for (int u = u_lo; u <= u_hi; ++u) {
        const double du = u - cx;
        const double dv = v - cy;
        if (du * du + dv * dv <= radius * radius)
          map.planes[0](v, u) = r.value + 16.0 * (coarse.at(u, v) - 0.5);
      }
  };

  // Road surface: march along the (curved) centerline stamping the band.
  // The per-pixel value formula makes overlapping stamps idempotent.
  for (const RoadSpec& r : roads)
    for (double t = -diag; t <= diag; t += 0.5) {
      double x, y, tu, tv;
      r.at(t, x, y, tu, tv);
      paint_band(r, x, y, r.half_width);
    }

  // Dashed lane markings along each road centerline. Spacing and length are
  // jittered per dash; a strictly periodic pattern would alias placements
  // offset by whole periods along the road.
  for (const RoadSpec& r : roads) {
    double t = -diag;
    while (t <= diag) {
      t += rng.uniform(28.0, 52.0);
      const double half_len = 0.5 * rng.uniform(12.0, 20.0);
      if (rng.uniform01() >= spec.marking_density) continue;
      double cx, cy, tu, tv;
      r.at(t, cx, cy, tu, tv);
      bool inside = true;
      for (int corner = 0; corner < 4 && inside; ++corner) {
        const double a = (corner & 1) ? half_len : -half_len;
        const double b = (corner & 2) ? 2.5 : -2.5;
        const double x = cx + a * tu - b * tv;
        const double y = cy + a * tv + b * tu;
        inside = x >= 0 && x <= W - 1 && y >= 0 && y <= H - 1;
      }
      if (!inside) continue;
      for (double a = -half_len; a <= half_len; a += 0.5)
        for (double b = -2.5; b <= 2.5; b += 0.5) {
          const int u = static_cast<int>(std::lround(cx + a * tu - b * tv));
          const int v = static_cast<int>(std::lround(cy + a * tv + b * tu));
          if (u >= 0 && u < W && v >= 0 && v < H) map.planes[0](v, u) = 232.0;
        }
    }
  }

  // Well covers on the road surface at jittered lateral offsets. Their
  // spacing and offsets give each stretch of road a distinctive local
  // signature beyond the repeating dash shape.
  for (const RoadSpec& r : roads) {
    double t = -diag;
    while (t <= diag) {
      t += rng.uniform(30.0, 70.0);
      const double lateral = rng.uniform(-(r.half_width - 5.0), r.half_width - 5.0);
      const double radius = rng.uniform(2.5, 4.0);
      double x, y, tu, tv;
      r.at(t, x, y, tu, tv);
      fill_disk(map, x - lateral * tv, y + lateral * tu, radius, 246.0);
    }
  }

  const int covers = static_cast<int>(
      std::lround(spec.marking_density * static_cast<double>(W) * H / 8000.0));
  for (int i = 0; i < covers; ++i) {
    const double radius = rng.uniform(4.5, 7.5);
    const double cx = rng.uniform(radius, W - 1 - radius);
    const double cy = rng.uniform(radius, H - 1 - radius);
    fill_disk(map, cx, cy, radius, 246.0);
  }

  for (int v = 0; v < H; ++v)
    for (int u = 0; u < W; ++u)
      map.planes[0](v, u) =
          std::clamp(std::round(map.planes[0](v, u)), 0.0, 255.0);
  return map;
}

OrthoMap extract_local(const OrthoMap& global, const Pose2D& pose, int m, int n,
                       const DegradationParams& degrade, std::uint64_t seed) {
  global.validate();
  if (m <= 0 || n <= 0) throw std::invalid_argument("window size must be positive");
  if (degrade.edge_hollow_bias < 0.0 || degrade.edge_hollow_bias > 1.0)
    throw std::invalid_argument("edge hollow bias must be in [0,1]");

  const auto [cu, cv] = world_to_pixel(global, pose.x, pose.y);
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);

  OrthoMap local;
  local.resolution = global.resolution;
  local.origin_x = pose.x - 0.5 * (m - 1) * global.resolution;
  local.origin_y = pose.y - 0.5 * (n - 1) * global.resolution;
  for (std::size_t p = 0; p < global.planes.size(); ++p)
    local.planes.emplace_back(OrthoMap::Plane::Zero(n, m));
  const bool track_mask = global.has_mask();
  if (track_mask) local.ensure_mask();

  // Bilinear sampling keeps the capture sharper than nearest-neighbor, so
  // resampling error stays concentrated in the matcher's own rotation step.
  const int W = global.width();
  const int H = global.height();
  for (int t = 0; t < n; ++t)
    for (int ss = 0; ss < m; ++ss) {
      const double du = ss - 0.5 * (m - 1);
      const double dv = t - 0.5 * (n - 1);
      const double su = cu + c * du - s * dv;
      const double sv = cv + s * du + c * dv;
      if (su < 0.0 || su > W - 1 || sv < 0.0 || sv > H - 1)
        throw std::out_of_range("window out of bounds");
      const int u0 = std::min(static_cast<int>(su), W - 2 >= 0 ? W - 2 : 0);
      const int v0 = std::min(static_cast<int>(sv), H - 2 >= 0 ? H - 2 : 0);
      const int u1 = std::min(u0 + 1, W - 1);
      const int v1 = std::min(v0 + 1, H - 1);
      const double fu = su - u0;
      const double fv = sv - v0;
      const double w00 = (1.0 - fu) * (1.0 - fv);
      const double w10 = fu * (1.0 - fv);
      const double w01 = (1.0 - fu) * fv;
      const double w11 = fu * fv;
      for (std::size_t p = 0; p < global.planes.size(); ++p) {
        const auto& src = global.planes[p];
        local.planes[p](t, ss) = w00 * src(v0, u0) + w10 * src(v0, u1) +
                                 w01 * src(v1, u0) + w11 * src(v1, u1);
      }
      if (track_mask) {
        const bool ok = (w00 == 0.0 || global.mask(v0, u0) != 0) &&
                        (w10 == 0.0 || global.mask(v0, u1) != 0) &&
                        (w01 == 0.0 || global.mask(v1, u0) != 0) &&
                        (w11 == 0.0 || global.mask(v1, u1) != 0);
        local.mask(t, ss) = ok ? 255 : 0;
      }
    }

  SplitMix64 rng(seed);
  for (auto& plane : local.planes) {
    for (int t = 0; t < n; ++t)
      for (int ss = 0; ss < m; ++ss) {
        double val = degrade.gain * plane(t, ss) + degrade.bias;
        if (degrade.noise_sigma > 0.0) val += rng.normal(0.0, degrade.noise_sigma);
        plane(t, ss) = std::clamp(val, 0.0, 255.0);
      }
  }

  const double radius = degrade.hollow_radius_px;
  const double band = std::max(radius, 0.15 * std::min(m, n));
  for (int i = 0; i < degrade.hollow_count; ++i) {
    double cx, cy;
    if (rng.uniform01() < degrade.edge_hollow_bias) {
      const std::size_t side = rng.uniform_index(4);
      const double along =
          rng.uniform(0.0, side < 2 ? static_cast<double>(m - 1) : static_cast<double>(n - 1));
      const double depth = rng.uniform(0.0, band);
      switch (side) {
        case 0: cx = along; cy = depth; break;             // top
        case 1: cx = along; cy = (n - 1) - depth; break;   // bottom
        case 2: cx = depth; cy = along; break;             // left
        default: cx = (m - 1) - depth; cy = along; break;  // right
      }
    } else {
      cx = rng.uniform(0.0, static_cast<double>(m - 1));
      cy = rng.uniform(0.0, static_cast<double>(n - 1));
    }
    stamp_disk(local, cx, cy, radius);
  }
  return local;
}

TrajectorySample gen_trajectory(const SceneSpec& spec, int n_frames, double step,
                                const NoiseParams& odom_noise, std::uint64_t seed,
                                double margin_m) {
  if (n_frames <= 0) throw std::invalid_argument("frame count must be positive");
  if (step <= 0.0) throw std::invalid_argument("step must be positive");
  const double res = kDefaultResolution;
  const double x_max = (spec.width_px - 1) * res - margin_m;
  const double y_max = (spec.height_px - 1) * res - margin_m;
  if (margin_m >= x_max || margin_m >= y_max)
    throw std::invalid_argument("margin leaves no room for a path");

  SplitMix64 rng(seed);
  const double span_x = x_max - margin_m;
  const double span_y = y_max - margin_m;
  Pose2D pose;
  pose.x = rng.uniform(margin_m + 0.2 * span_x, x_max - 0.2 * span_x);
  pose.y = rng.uniform(margin_m + 0.2 * span_y, y_max - 0.2 * span_y);
  pose.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);

  TrajectorySample out;
  out.truth.entries.push_back({0, pose});
  out.odometry.reserve(static_cast<std::size_t>(n_frames) - 1);

  const double max_turn = 0.25;
  const double lookahead = std::max(4.0 * step, 1.5 * step / max_turn);
  const double cx = 0.5 * (margin_m + x_max);
  const double cy = 0.5 * (margin_m + y_max);
  const auto in_box = [&](double x, double y) {
    return x >= margin_m && x <= x_max && y >= margin_m && y <= y_max;
  };

  for (int k = 1; k < n_frames; ++k) {
    double turn = std::clamp(rng.normal(0.0, 0.06), -0.12, 0.12);
    const double probe = pose.heading + turn;
    if (!in_box(pose.x + lookahead * std::cos(probe), pose.y + lookahead * std::sin(probe))) {
      const double desired = std::atan2(cy - pose.y, cx - pose.x);
      turn = std::clamp(Pose2D::wrap_angle(desired - pose.heading), -max_turn, max_turn);
    }
    const Pose2D prev = pose;
    pose.heading = Pose2D::wrap_angle(pose.heading + turn);
    pose.x += step * std::cos(pose.heading);
    pose.y += step * std::sin(pose.heading);
    if (!in_box(pose.x, pose.y))
      throw std::runtime_error("path would exit map at frame " + std::to_string(k));
    out.truth.entries.push_back({k, pose});

    const double gx = pose.x - prev.x;
    const double gy = pose.y - prev.y;
    const double pc = std::cos(prev.heading);
    const double ps = std::sin(prev.heading);
    OdometryDelta d;
    d.dx = pc * gx + ps * gy + rng.normal(0.0, odom_noise.sigma_pos);
    d.dy = -ps * gx + pc * gy + rng.normal(0.0, odom_noise.sigma_pos);
    d.dtheta = Pose2D::wrap_angle(pose.heading - prev.heading) +
               rng.normal(0.0, odom_noise.sigma_rot);
    out.odometry.push_back(d);
  }
  return out;
}

double masked_sad(const OrthoMap& a, const OrthoMap& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.planes.size() != b.planes.size())
    throw std::invalid_argument("masked SAD requires equal map shapes");
  double sum = 0.0;
  long count = 0;
  for (int v = 0; v < a.height(); ++v)
    for (int u = 0; u < a.width(); ++u) {
      if (!a.valid(u, v) || !b.valid(u, v)) continue;
      for (std::size_t p = 0; p < a.planes.size(); ++p)
        sum += std::abs(a.planes[p](v, u) - b.planes[p](v, u));
      ++count;
    }
  if (count == 0) throw std::runtime_error("no overlapping valid pixels");
  return sum;
}

}  // namespace ortholoc
