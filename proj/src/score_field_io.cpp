#include "ortholoc/score_field_io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "ortholoc/pixmap_io.hpp"

namespace ortholoc {
namespace {

constexpr char kMagic[4] = {'S', 'F', 'L', 'D'};

void put_u32le(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32le(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

// [min, max] over valid placements; nullopt-like flag when none are valid
bool valid_range(const ScoreField& field, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int v = 0; v < field.placements_h; ++v)
    for (int u = 0; u < field.placements_w; ++u)
      if (field.is_valid(u, v)) {
        any = true;
        lo = std::min(lo, field.at(u, v));
        hi = std::max(hi, field.at(u, v));
      }
  return any;
}

double normalized01(const ScoreField& field, int u, int v, double lo, double hi) {
  if (!field.is_valid(u, v) || hi <= lo) return 0.0;
  return (field.at(u, v) - lo) / (hi - lo);
}

}  // namespace

void write_score_field(const ScoreField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write score field: " + path);
  out.write(kMagic, 4);
  put_u32le(out, static_cast<std::uint32_t>(field.placements_w));
  put_u32le(out, static_cast<std::uint32_t>(field.placements_h));
  // reserved word: low byte carries the method id
  put_u32le(out, static_cast<std::uint32_t>(field.method));
  std::vector<float> row(field.placements_w);
  for (int v = 0; v < field.placements_h; ++v) {
    for (int u = 0; u < field.placements_w; ++u) row[u] = static_cast<float>(field.scores(v, u));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("cannot write score field: " + path);
}

ScoreField read_score_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open score field: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("malformed score field (bad magic): " + path);
  ScoreField field;
  field.placements_w = static_cast<int>(get_u32le(in));
  field.placements_h = static_cast<int>(get_u32le(in));
  const std::uint32_t reserved = get_u32le(in);
  if (!in || field.placements_w < 1 || field.placements_h < 1 || (reserved & 0xff) > 3)
    throw std::runtime_error("malformed score field header: " + path);
  field.method = static_cast<MatchMethod>(reserved & 0xff);
  field.scores.resize(field.placements_h, field.placements_w);
  std::vector<float> row(field.placements_w);
  for (int v = 0; v < field.placements_h; ++v) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw std::runtime_error("malformed score field (truncated): " + path);
    for (int u = 0; u < field.placements_w; ++u) field.scores(v, u) = row[u];
  }
  return field;
}

void write_heatmap_pgm(const ScoreField& field, const std::string& path) {
  double lo, hi;
  valid_range(field, lo, hi);
  OrthoMap img = OrthoMap::gray(field.placements_w, field.placements_h);
  for (int v = 0; v < field.placements_h; ++v)
    for (int u = 0; u < field.placements_w; ++u)
      img.planes[0](v, u) = std::round(255.0 * normalized01(field, u, v, lo, hi));
  save_map(img, path);
}

void write_heatmap_ppm(const ScoreField& field, const std::string& path) {
  // jet-style lookup: channel(t) = clamp(1.5 - |4t - c|) with c = 3, 2, 1
  const auto channel = [](double t, double c) {
    return std::clamp(1.5 - std::abs(4.0 * t - c), 0.0, 1.0);
  };
  double lo, hi;
  valid_range(field, lo, hi);
  OrthoMap img = OrthoMap::rgb(field.placements_w, field.placements_h);
  for (int v = 0; v < field.placements_h; ++v)
    for (int u = 0; u < field.placements_w; ++u) {
      const double t = std::round(255.0 * normalized01(field, u, v, lo, hi)) / 255.0;
      img.planes[0](v, u) = std::round(255.0 * channel(t, 3.0));
      img.planes[1](v, u) = std::round(255.0 * channel(t, 2.0));
      img.planes[2](v, u) = std::round(255.0 * channel(t, 1.0));
    }
  save_map(img, path);
}

}  // namespace ortholoc
