#include <doctest.h>

#include <cmath>
#include <utility>

#include "ortholoc/kernel.hpp"

using namespace ortholoc;

TEST_CASE("literal kernel matches direct evaluation of its formula") {
  // spot probes, hand-evaluated: w(s,t) = |2 - |M/2 - s| * |N/2 - t|| at
  // 1-based indices. 4x4 center (s=t=2): |2 - 0*0| = 2. 8x8 corner (s=t=1):
  // |2 - 3*3| = 7.
  const WeightKernel k4 = make_kernel(KernelKind::kPaperLiteral, 4, 4);
  CHECK(k4.at(1, 1) == 2.0);
  const WeightKernel k8 = make_kernel(KernelKind::kPaperLiteral, 8, 8);
  CHECK(k8.at(0, 0) == 7.0);

  // the full surface agrees with an inline re-evaluation
  const std::pair<int, int> sizes[] = {{4, 4}, {8, 8}, {5, 7}, {16, 16}};
  for (const auto& [m, n] : sizes) {
    const WeightKernel k = make_kernel(KernelKind::kPaperLiteral, m, n);
    for (int t = 1; t <= n; ++t)
      for (int s = 1; s <= m; ++s) {
        const double expect = std::abs(2.0 - std::abs(0.5 * m - s) * std::abs(0.5 * n - t));
        CHECK(k.at(s - 1, t - 1) == expect);
      }
  }

  // the literal surface is corner-heavy: for sizes above 4 the corner weight
  // exceeds the center weight, the opposite of a usable center emphasis
  CHECK(k8.at(0, 0) > k8.at(3, 3));
}

TEST_CASE("corrected kernel peaks at 1 in the center and hits 0 on the border") {
  const std::pair<int, int> sizes[] = {{5, 5}, {8, 8}, {7, 4}, {64, 64}};
  for (const auto& [m, n] : sizes) {
    const WeightKernel k = make_kernel(KernelKind::kCorrected, m, n);

    double max_w = 0.0;
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < m; ++s) {
        CHECK(k.at(s, t) >= 0.0);
        max_w = std::max(max_w, k.at(s, t));
      }
    CHECK(max_w == 1.0);

    // central sample(s) exactly 1 (both of them for even sizes)
    CHECK(k.at((m - 1) / 2, (n - 1) / 2) == 1.0);
    CHECK(k.at(m / 2, n / 2) == 1.0);

    // border ring exactly 0
    for (int s = 0; s < m; ++s) {
      CHECK(k.at(s, 0) == 0.0);
      CHECK(k.at(s, n - 1) == 0.0);
    }
    for (int t = 0; t < n; ++t) {
      CHECK(k.at(0, t) == 0.0);
      CHECK(k.at(m - 1, t) == 0.0);
    }

    // per-axis monotone: weights never increase moving away from the center
    const int mid_t = (n - 1) / 2;
    for (int s = m / 2; s + 1 < m; ++s) CHECK(k.at(s + 1, mid_t) <= k.at(s, mid_t));
    for (int s = (m - 1) / 2; s > 0; --s) CHECK(k.at(s - 1, mid_t) <= k.at(s, mid_t));
    const int mid_s = (m - 1) / 2;
    for (int t = n / 2; t + 1 < n; ++t) CHECK(k.at(mid_s, t + 1) <= k.at(mid_s, t));

    // separable and symmetric
    CHECK(k.at(1, mid_t) == k.at(m - 2, mid_t));
  }
}

TEST_CASE("degenerate kernel sizes fall back to all-ones") {
  const std::pair<int, int> sizes[] = {{1, 1}, {2, 2}, {1, 5}, {2, 3}};
  for (const auto& [m, n] : sizes) {
    const WeightKernel k = make_kernel(KernelKind::kCorrected, m, n);
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < m; ++s)
        if (m <= 2 && n <= 2) CHECK(k.at(s, t) == 1.0);
    // mixed sizes keep the nontrivial axis zero-ended
    if (n > 2) {
      CHECK(k.at(0, 0) == 0.0);
      CHECK(k.at(0, (n - 1) / 2) == 1.0);
    }
  }
  CHECK_THROWS_AS(make_kernel(KernelKind::kCorrected, 0, 3), std::invalid_argument);
}

TEST_CASE("uniform kernel is all-ones") {
  const WeightKernel k = make_kernel(KernelKind::kUniform, 6, 3);
  CHECK(k.weights.minCoeff() == 1.0);
  CHECK(k.weights.maxCoeff() == 1.0);
  CHECK(k.m == 6);
  CHECK(k.n == 3);
}

TEST_CASE("kernel kinds round-trip through their names") {
  for (const auto kind :
       {KernelKind::kPaperLiteral, KernelKind::kCorrected, KernelKind::kUniform})
    CHECK(kernel_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(kernel_kind_from_string("gaussian"), std::invalid_argument);
}
