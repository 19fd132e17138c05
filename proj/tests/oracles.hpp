#pragma once

// Independent reference implementations of the four placement scorers,
// written as plain quadruple loops with no shared code or Eigen expressions,
// so agreement with the library cannot come from a shared bug.

#include <cmath>
#include <limits>
#include <optional>

#include "ortholoc/image.hpp"
#include "ortholoc/kernel.hpp"
#include "ortholoc/matching.hpp"

namespace oracle {

constexpr double kVarianceFloor = 1e-9;

/// Scores the m x n window of `map` at (u, v) against `tpl` the slow way.
/// Returns the method's sentinel (+inf / -inf) for degenerate placements.
/// For WNCC a null kernel means all-ones weights.
inline double score(const ortholoc::OrthoMap& map, int u, int v, const ortholoc::OrthoMap& tpl,
                    ortholoc::MatchMethod method,
                    const ortholoc::WeightKernel* kernel = nullptr) {
  using ortholoc::MatchMethod;
  const int m = tpl.width();
  const int n = tpl.height();

  if (method == MatchMethod::kSsd || method == MatchMethod::kSad) {
    double acc = 0.0;
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < m; ++s) {
        const double d = map.planes[0](v + t, u + s) - tpl.planes[0](t, s);
        acc += method == MatchMethod::kSsd ? d * d : std::abs(d);
      }
    return acc;
  }

  double rbar = 0.0, pbar = 0.0;
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < m; ++s) {
      rbar += map.planes[0](v + t, u + s);
      pbar += tpl.planes[0](t, s);
    }
  const double count = static_cast<double>(m) * n;
  rbar /= count;
  pbar /= count;

  double rss = 0.0, pss = 0.0, num = 0.0;
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < m; ++s) {
      const double rd = map.planes[0](v + t, u + s) - rbar;
      const double pd = tpl.planes[0](t, s) - pbar;
      rss += rd * rd;
      pss += pd * pd;
      if (method == MatchMethod::kNcc) {
        num += rd * pd;
      } else {
        const double w = kernel ? kernel->at(s, t) : 1.0;
        num += std::abs(w) * std::abs(rd) * std::abs(pd);
      }
    }
  if (rss <= kVarianceFloor || pss <= kVarianceFloor)
    return -std::numeric_limits<double>::infinity();
  return num / std::sqrt(rss * pss);
}

struct SearchResult {
  int best_u = -1;
  int best_v = -1;
  double best_score = 0.0;
};

/// Exhaustive search with the same tie-break rule the library contracts
/// (first optimum in row-major placement order).
inline SearchResult search(const ortholoc::OrthoMap& map, const ortholoc::OrthoMap& tpl,
                           ortholoc::MatchMethod method,
                           const ortholoc::WeightKernel* kernel = nullptr) {
  const bool maximize = higher_is_better(method);
  SearchResult best;
  for (int v = 0; v + tpl.height() <= map.height(); ++v)
    for (int u = 0; u + tpl.width() <= map.width(); ++u) {
      const double s = score(map, u, v, tpl, method, kernel);
      if (!std::isfinite(s)) continue;
      if (best.best_u < 0 || (maximize ? s > best.best_score : s < best.best_score)) {
        best = {u, v, s};
      }
    }
  return best;
}

}  // namespace oracle
