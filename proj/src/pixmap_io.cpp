#include "ortholoc/pixmap_io.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

namespace ortholoc {
namespace {

constexpr long kMaxPixels = 1L << 28;  // dimension-overflow guard

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      tok.push_back(static_cast<char>(ch));
      break;
    }
  }
  while ((ch = in.get()) != EOF && !std::isspace(ch)) tok.push_back(static_cast<char>(ch));
  return tok;
}

long parse_dim(const std::string& tok, const std::string& path) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error("malformed pixmap header: " + path);
  errno = 0;
  const long v = std::strtol(tok.c_str(), nullptr, 10);
  if (errno != 0 || v < 1 || v > kMaxPixels)
    throw std::runtime_error("malformed pixmap header (dimension out of range): " + path);
  return v;
}

struct RawPixmap {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

RawPixmap read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pixmap: " + path);

  const std::string magic = next_token(in);
  RawPixmap raw;
  if (magic == "P5")
    raw.channels = 1;
  else if (magic == "P6")
    raw.channels = 3;
  else
    throw std::runtime_error("malformed pixmap (expected P5 or P6): " + path);

  const long w = parse_dim(next_token(in), path);
  const long h = parse_dim(next_token(in), path);
  if (w * h > kMaxPixels) throw std::runtime_error("malformed pixmap header (dimension out of range): " + path);
  const long maxval = parse_dim(next_token(in), path);
  if (maxval != 255) throw std::runtime_error("malformed pixmap (only maxval 255 supported): " + path);

  raw.width = static_cast<int>(w);
  raw.height = static_cast<int>(h);
  raw.data.resize(static_cast<size_t>(w) * h * raw.channels);
  in.read(reinterpret_cast<char*>(raw.data.data()), static_cast<std::streamsize>(raw.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.data.size()))
    throw std::runtime_error("malformed pixmap (truncated pixel data): " + path);
  return raw;
}

void write_pnm(const std::string& path, int width, int height, int channels,
               const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write pixmap: " + path);
  out << (channels == 1 ? "P5" : "P6") << "\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("cannot write pixmap: " + path);
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::llround(std::clamp(v, 0.0, 255.0)));
}

}  // namespace

std::string mask_path_for(const std::string& path) {
  std::filesystem::path p(path);
  std::filesystem::path stem = p.parent_path() / p.stem();
  return stem.string() + ".mask.pgm";
}

OrthoMap load_map(const std::string& path, double resolution) {
  const RawPixmap raw = read_pnm(path);
  OrthoMap map;
  map.resolution = resolution;
  for (int c = 0; c < raw.channels; ++c)
    map.planes.push_back(OrthoMap::Plane::Zero(raw.height, raw.width));
  for (int v = 0; v < raw.height; ++v)
    for (int u = 0; u < raw.width; ++u)
      for (int c = 0; c < raw.channels; ++c)
        map.planes[c](v, u) =
            raw.data[(static_cast<size_t>(v) * raw.width + u) * raw.channels + c];

  const std::string mpath = mask_path_for(path);
  if (std::filesystem::exists(mpath)) {
    const RawPixmap mraw = read_pnm(mpath);
    if (mraw.channels != 1 || mraw.width != raw.width || mraw.height != raw.height)
      throw std::runtime_error("mask does not match pixmap dimensions: " + mpath);
    map.mask = OrthoMap::Mask::Zero(raw.height, raw.width);
    for (int v = 0; v < raw.height; ++v)
      for (int u = 0; u < raw.width; ++u)
        map.mask(v, u) = mraw.data[static_cast<size_t>(v) * raw.width + u] ? 255 : 0;
  }
  map.validate();
  return map;
}

void save_map(const OrthoMap& map, const std::string& path) {
  map.validate();
  const int w = map.width();
  const int h = map.height();
  const int ch = static_cast<int>(map.planes.size());
  std::vector<std::uint8_t> data(static_cast<size_t>(w) * h * ch);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u)
      for (int c = 0; c < ch; ++c)
        data[(static_cast<size_t>(v) * w + u) * ch + c] = quantize(map.planes[c](v, u));
  write_pnm(path, w, h, ch, data);

  if (map.has_mask()) {
    std::vector<std::uint8_t> mdata(static_cast<size_t>(w) * h);
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u) mdata[static_cast<size_t>(v) * w + u] = map.mask(v, u) ? 255 : 0;
    write_pnm(mask_path_for(path), w, h, 1, mdata);
  }
}

}  // namespace ortholoc
