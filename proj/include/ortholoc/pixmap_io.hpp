#pragma once

#include <string>

#include "ortholoc/image.hpp"

namespace ortholoc {

/// Loads a binary pixmap (8-bit P5 PGM or 24-bit P6 PPM) as an OrthoMap with
/// the stated resolution. A sidecar mask named `<stem>.mask.pgm` (255 = valid,
/// 0 = invalid) is picked up automatically when present; otherwise the map is
/// all-valid. Throws std::runtime_error on missing or malformed files.
OrthoMap load_map(const std::string& path, double resolution = 0.1);

/// Writes a map as P5 (grayscale) or P6 (RGB), rounding pixel values to the
/// nearest integer in [0, 255]. If the map carries a mask, the sidecar
/// `<stem>.mask.pgm` is written alongside.
void save_map(const OrthoMap& map, const std::string& path);

/// Sidecar mask path for a pixmap path: "dir/name.pgm" -> "dir/name.mask.pgm".
std::string mask_path_for(const std::string& path);

}  // namespace ortholoc
