#pragma once

#include <string>

#include "ortholoc/matching.hpp"

namespace ortholoc {

/// Raw score-field dump: 16-byte header (magic "SFLD", little-endian uint32
/// width and height, one reserved little-endian uint32 whose low byte holds
/// the method id) followed by row-major float32 scores. Sentinel placements
/// are stored as their (infinite) float value.
void write_score_field(const ScoreField& field, const std::string& path);
ScoreField read_score_field(const std::string& path);

/// Renders the field as an 8-bit grayscale heatmap, min-max normalized over
/// the valid placements; sentinel placements map to 0.
void write_heatmap_pgm(const ScoreField& field, const std::string& path);

/// Same normalization rendered through a fixed 256-entry blue-to-red lookup
/// table as a 24-bit PPM.
void write_heatmap_ppm(const ScoreField& field, const std::string& path);

}  // namespace ortholoc
