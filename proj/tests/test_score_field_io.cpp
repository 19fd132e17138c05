#include <doctest.h>

#include <fstream>
#include <limits>

#include "ortholoc/pixmap_io.hpp"
#include "ortholoc/score_field_io.hpp"
#include "test_util.hpp"

using namespace ortholoc;

namespace {

ScoreField sample_field() {
  ScoreField f;
  f.placements_w = 3;
  f.placements_h = 2;
  f.method = MatchMethod::kWncc;
  f.scores.resize(2, 3);
  f.scores << 0.25, 0.5, 1.0, 0.0, -std::numeric_limits<double>::infinity(), 0.75;
  return f;
}

}  // namespace

TEST_CASE("score fields round-trip through the binary dump") {
  testutil::TempDir dir("sfld");
  const ScoreField f = sample_field();
  const std::string path = dir.file("f.sfld");
  write_score_field(f, path);

  const ScoreField back = read_score_field(path);
  CHECK(back.placements_w == 3);
  CHECK(back.placements_h == 2);
  CHECK(back.method == MatchMethod::kWncc);
  for (int v = 0; v < 2; ++v)
    for (int u = 0; u < 3; ++u) {
      if (f.is_valid(u, v)) {
        // float32 storage: exact for these dyadic values
        CHECK(back.at(u, v) == f.at(u, v));
      } else {
        CHECK_FALSE(back.is_valid(u, v));
        CHECK(back.at(u, v) == f.at(u, v));  // sentinel survives as -inf
      }
    }
}

TEST_CASE("malformed score field files are rejected") {
  testutil::TempDir dir("sfldbad");
  CHECK_THROWS_WITH_AS(read_score_field(dir.file("missing.sfld")),
                       doctest::Contains("cannot open"), std::runtime_error);

  {
    std::ofstream out(dir.file("magic.sfld"), std::ios::binary);
    out << "NOPE" << std::string(12, '\0');
  }
  CHECK_THROWS_WITH_AS(read_score_field(dir.file("magic.sfld")),
                       doctest::Contains("bad magic"), std::runtime_error);

  {
    // valid header for 4x4 but no payload
    std::ofstream out(dir.file("trunc.sfld"), std::ios::binary);
    out << "SFLD";
    const unsigned char header[12] = {4, 0, 0, 0, 4, 0, 0, 0, 3, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(header), 12);
  }
  CHECK_THROWS_WITH_AS(read_score_field(dir.file("trunc.sfld")),
                       doctest::Contains("truncated"), std::runtime_error);

  {
    // method id out of range
    std::ofstream out(dir.file("method.sfld"), std::ios::binary);
    out << "SFLD";
    const unsigned char header[12] = {1, 0, 0, 0, 1, 0, 0, 0, 9, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(header), 12);
    const float zero = 0.0f;
    out.write(reinterpret_cast<const char*>(&zero), sizeof zero);
  }
  CHECK_THROWS_WITH_AS(read_score_field(dir.file("method.sfld")),
                       doctest::Contains("header"), std::runtime_error);
}

TEST_CASE("grayscale heatmap normalizes valid scores and zeroes sentinels") {
  testutil::TempDir dir("heat");
  const ScoreField f = sample_field();
  const std::string path = dir.file("f.heatmap.pgm");
  write_heatmap_pgm(f, path);

  const OrthoMap img = load_map(path);
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  // min-max normalization over the five valid placements: 0 -> 0, 1 -> 255
  CHECK(img.value(2, 0) == 255.0);
  CHECK(img.value(0, 1) == 0.0);
  CHECK(img.value(0, 0) == std::round(255.0 * 0.25));
  // the sentinel placement renders black
  CHECK(img.value(1, 1) == 0.0);
}

TEST_CASE("color heatmap maps low scores blue and high scores red") {
  testutil::TempDir dir("heatppm");
  const ScoreField f = sample_field();
  const std::string path = dir.file("f.heatmap.ppm");
  write_heatmap_ppm(f, path);

  const OrthoMap img = load_map(path);
  CHECK(img.channels() == Channels::kRgb);
  // best placement: red dominates; worst: blue dominates
  CHECK(img.value(2, 0, 0) > img.value(2, 0, 2));
  CHECK(img.value(0, 1, 2) > img.value(0, 1, 0));
}
