#include <doctest.h>

#include <cmath>
#include <fstream>

#include "ortholoc/trajectory.hpp"
#include "test_util.hpp"

using namespace ortholoc;

namespace {

Trajectory line(int n, double x0, double y0, double step) {
  Trajectory t;
  for (int k = 0; k < n; ++k) t.push_back(k, {x0 + step * k, y0, 0.25 * k});
  return t;
}

}  // namespace

TEST_CASE("frame indices must strictly increase") {
  Trajectory ok = line(5, 0, 0, 0.3);
  CHECK_NOTHROW(ok.validate());

  Trajectory dup;
  dup.push_back(0, {});
  dup.push_back(0, {1, 0, 0});
  CHECK_THROWS_WITH_AS(dup.validate(), "trajectory frame indices must strictly increase",
                       std::invalid_argument);

  Trajectory back;
  back.push_back(3, {});
  back.push_back(1, {});
  CHECK_THROWS_AS(back.validate(), std::invalid_argument);
}

TEST_CASE("rmse reduces per-frame position errors") {
  Trajectory truth;
  truth.push_back(0, {0.0, 0.0, 0.0});
  truth.push_back(1, {1.0, 0.0, 0.0});
  Trajectory est;
  est.push_back(0, {0.3, 0.0, 2.0});  // heading differences are ignored
  est.push_back(1, {1.0, 0.4, -1.0});

  const RmseReport report = compute_rmse(est, truth, "probe");
  CHECK(report.method == "probe");
  REQUIRE(report.per_frame_errors.size() == 2);
  CHECK(report.per_frame_errors[0] == doctest::Approx(0.3));
  CHECK(report.per_frame_errors[1] == doctest::Approx(0.4));
  CHECK(report.rmse == doctest::Approx(std::sqrt((0.09 + 0.16) / 2.0)));  // 0.35355...

  // identical trajectories: zero everywhere
  CHECK(compute_rmse(truth, truth).rmse == 0.0);
}

TEST_CASE("rmse is invariant to a common shift and equals a pure offset") {
  const Trajectory truth = line(8, 2.0, 3.0, 0.4);
  Trajectory est = truth;
  for (auto& e : est.entries) {
    e.pose.x += 0.3;
    e.pose.y += 0.4;
  }
  const double d = compute_rmse(est, truth).rmse;
  CHECK(d == doctest::Approx(0.5));  // hypot(0.3, 0.4) on every frame

  // shifting both by the same offset leaves the report unchanged
  Trajectory truth2 = truth, est2 = est;
  for (auto& e : truth2.entries) e.pose.x += 11.0;
  for (auto& e : est2.entries) e.pose.x += 11.0;
  CHECK(compute_rmse(est2, truth2).rmse == doctest::Approx(d));
}

TEST_CASE("rmse rejects mismatched inputs") {
  const Trajectory a = line(4, 0, 0, 0.1);
  Trajectory b = line(4, 0, 0, 0.1);
  b.entries[2].frame = 7;
  CHECK_THROWS_WITH_AS(compute_rmse(a, b),
                       "frame-index mismatch between estimate and ground truth",
                       std::runtime_error);

  const Trajectory shorter = line(3, 0, 0, 0.1);
  CHECK_THROWS_AS(compute_rmse(a, shorter), std::runtime_error);

  CHECK_THROWS_WITH_AS(compute_rmse(Trajectory{}, Trajectory{}),
                       "cannot compute RMSE of empty trajectories", std::runtime_error);
}

TEST_CASE("trajectory csv round-trips at full precision") {
  testutil::TempDir dir("traj");
  Trajectory t;
  t.push_back(0, {0.1 + 0.2, -7.25, 3.14159265358979});
  t.push_back(3, {1e-13, 42.0, -3.0});
  t.push_back(10, {123.456789012345678, 0.0, 0.0});

  const std::string path = dir.file("t.csv");
  write_trajectory_csv(t, path);
  const Trajectory back = read_trajectory_csv(path);

  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.entries[i].frame == t.entries[i].frame);
    CHECK(back.entries[i].pose.x == t.entries[i].pose.x);
    CHECK(back.entries[i].pose.y == t.entries[i].pose.y);
    CHECK(back.entries[i].pose.heading == t.entries[i].pose.heading);
  }
}

TEST_CASE("malformed trajectory csv is rejected") {
  testutil::TempDir dir("trajbad");
  CHECK_THROWS_WITH_AS(read_trajectory_csv(dir.file("missing.csv")),
                       doctest::Contains("cannot open"), std::runtime_error);

  {
    std::ofstream out(dir.file("head.csv"));
    out << "x,y,z\n0,0,0,0\n";
  }
  CHECK_THROWS_WITH_AS(read_trajectory_csv(dir.file("head.csv")),
                       doctest::Contains("header"), std::runtime_error);

  {
    std::ofstream out(dir.file("row.csv"));
    out << "frame,x,y,heading\n0,1.0,2.0\n";
  }
  CHECK_THROWS_WITH_AS(read_trajectory_csv(dir.file("row.csv")),
                       doctest::Contains("line 2"), std::runtime_error);
}
