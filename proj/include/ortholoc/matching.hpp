#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ortholoc/image.hpp"
#include "ortholoc/kernel.hpp"

namespace ortholoc {

enum class MatchMethod { kSsd, kSad, kNcc, kWncc };

MatchMethod match_method_from_string(const std::string& name);
std::string to_string(MatchMethod method);

/// True for correlation methods (maximize), false for difference methods
/// (minimize).
inline bool higher_is_better(MatchMethod method) {
  return method == MatchMethod::kNcc || method == MatchMethod::kWncc;
}

/// Placements whose centered sum of squares falls at or below this floor are
/// treated as zero-variance (degenerate) by the correlation scorers.
inline constexpr double kVarianceFloor = 1e-9;

/// Dense scores over all window placements of a template search. Row v /
/// column u of `scores` holds the score of the window whose upper-left pixel
/// is (u, v). Degenerate placements carry a non-finite sentinel (+inf for
/// difference methods, -inf for correlation methods) and are excluded from
/// the optimum.
struct ScoreField {
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  int placements_w = 0;
  int placements_h = 0;
  MatchMethod method = MatchMethod::kNcc;
  Matrix scores;

  double at(int u, int v) const { return scores(v, u); }
  bool is_valid(int u, int v) const { return std::isfinite(scores(v, u)); }

  static double sentinel(MatchMethod method) {
    return higher_is_better(method) ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
  }
};

/// Optimal placement of a template search; ties go to the smallest v, then
/// the smallest u.
struct MatchResult {
  int best_u = 0;
  int best_v = 0;
  double best_score = 0.0;
  ScoreField field;
};

namespace detail {

using MatrixXdRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Template-side quantities hoisted out of the placement loop.
struct TemplateStats {
  MatrixXdRM raw;   // P
  MatrixXdRM dev;   // P - mean(P)
  MatrixXdRM wabs;  // weight .* |P - mean(P)|
  double mean = 0.0;
  double ss = 0.0;  // sum (P - mean)^2
  bool degenerate = false;
};

template <typename S>
TemplateStats make_template_stats(const OrthoMapT<S>& tpl, MatchMethod method,
                                  const WeightKernel* kernel) {
  TemplateStats st;
  st.raw = tpl.planes[0].template cast<double>();
  st.mean = st.raw.mean();
  if (higher_is_better(method)) {
    st.dev = (st.raw.array() - st.mean).matrix();
    st.ss = st.dev.squaredNorm();
    st.degenerate = st.ss <= kVarianceFloor;
    if (method == MatchMethod::kWncc) st.wabs = kernel->weights.cwiseProduct(st.dev.cwiseAbs());
  }
  return st;
}

/// Scores one placement; returns the method's sentinel for degenerate pairs.
template <typename S>
double score_at(const OrthoMapT<S>& map, int u, int v, MatchMethod method,
                const TemplateStats& st) {
  const int m = static_cast<int>(st.raw.cols());
  const int n = static_cast<int>(st.raw.rows());
  const auto rw = map.planes[0].block(v, u, n, m).template cast<double>();
  switch (method) {
    case MatchMethod::kSsd:
      return (rw - st.raw).squaredNorm();
    case MatchMethod::kSad:
      return (rw - st.raw).cwiseAbs().sum();
    case MatchMethod::kNcc: {
      if (st.degenerate) return ScoreField::sentinel(method);
      const double rbar = rw.sum() / (double(m) * n);
      const double rss = (rw.array() - rbar).matrix().squaredNorm();
      if (rss <= kVarianceFloor) return ScoreField::sentinel(method);
      const double num = ((rw.array() - rbar) * st.dev.array()).sum();
      return num / std::sqrt(rss * st.ss);
    }
    case MatchMethod::kWncc: {
      if (st.degenerate) return ScoreField::sentinel(method);
      const double rbar = rw.sum() / (double(m) * n);
      const double rss = (rw.array() - rbar).matrix().squaredNorm();
      if (rss <= kVarianceFloor) return ScoreField::sentinel(method);
      const double num = ((rw.array() - rbar).abs() * st.wabs.array()).sum();
      return num / std::sqrt(rss * st.ss);
    }
  }
  return ScoreField::sentinel(method);
}

template <typename S>
void require_gray(const OrthoMapT<S>& map, const char* what) {
  if (map.planes.empty() || map.planes[0].size() == 0)
    throw std::invalid_argument(std::string(what) + " is empty");
  if (!map.is_gray()) throw std::invalid_argument(std::string(what) + " must be grayscale");
}

template <typename S>
void require_same_size(const OrthoMapT<S>& window, const OrthoMapT<S>& tpl) {
  require_gray(window, "window");
  require_gray(tpl, "template");
  if (window.width() != tpl.width() || window.height() != tpl.height())
    throw std::invalid_argument("dimension mismatch between window and template");
}

inline void require_kernel(const WeightKernel& kernel, int m, int n) {
  if (kernel.m != m || kernel.n != n || kernel.weights.rows() != n || kernel.weights.cols() != m)
    throw std::invalid_argument("kernel dimensions do not match template");
}

}  // namespace detail

/// Arithmetic mean over all template pixels (the validity mask is ignored).
template <typename S>
double template_mean(const OrthoMapT<S>& tpl) {
  detail::require_gray(tpl, "template");
  return tpl.planes[0].template cast<double>().mean();
}

/// Mean of the m x n window of `map` with upper-left pixel (u, v).
template <typename S>
double window_mean(const OrthoMapT<S>& map, int u, int v, int m, int n) {
  detail::require_gray(map, "map");
  if (m < 1 || n < 1 || u < 0 || v < 0 || u + m > map.width() || v + n > map.height())
    throw std::out_of_range("window out of bounds");
  return map.planes[0].block(v, u, n, m).template cast<double>().mean();
}

/// Sum of squared pixel differences (lower is better, masks ignored).
template <typename S>
double score_ssd(const OrthoMapT<S>& window, const OrthoMapT<S>& tpl) {
  detail::require_same_size(window, tpl);
  return (window.planes[0].template cast<double>() - tpl.planes[0].template cast<double>())
      .squaredNorm();
}

/// Sum of absolute pixel differences (lower is better, masks ignored).
template <typename S>
double score_sad(const OrthoMapT<S>& window, const OrthoMapT<S>& tpl) {
  detail::require_same_size(window, tpl);
  return (window.planes[0].template cast<double>() - tpl.planes[0].template cast<double>())
      .cwiseAbs()
      .sum();
}

/// Zero-mean normalized cross correlation in [-1, 1]. Throws "degenerate
/// patch" if either operand has (numerically) zero variance.
template <typename S>
double score_ncc(const OrthoMapT<S>& window, const OrthoMapT<S>& tpl) {
  detail::require_same_size(window, tpl);
  const auto st = detail::make_template_stats(tpl, MatchMethod::kNcc, nullptr);
  if (st.degenerate) throw std::runtime_error("degenerate patch");
  const double s = detail::score_at(window, 0, 0, MatchMethod::kNcc, st);
  if (!std::isfinite(s)) throw std::runtime_error("degenerate patch");
  return s;
}

/// Weighted normalized cross correlation: nonnegative, and bounded by the
/// kernel's maximum weight. The numerator correlates absolute deviations from
/// the window/template means, each scaled by the kernel weight; the
/// denominator is the usual product of centered norms.
template <typename S>
double score_wncc(const OrthoMapT<S>& window, const OrthoMapT<S>& tpl,
                  const WeightKernel& kernel) {
  detail::require_same_size(window, tpl);
  detail::require_kernel(kernel, tpl.width(), tpl.height());
  const auto st = detail::make_template_stats(tpl, MatchMethod::kWncc, &kernel);
  if (st.degenerate) throw std::runtime_error("degenerate patch");
  const double s = detail::score_at(window, 0, 0, MatchMethod::kWncc, st);
  if (!std::isfinite(s)) throw std::runtime_error("degenerate patch");
  return s;
}

/// Scores the single m x n window of `map` at origin (u, v) against the
/// template; nullopt for degenerate placements instead of throwing. Used by
/// callers that score many windows and need a cheap failure path.
template <typename S>
std::optional<double> score_window(const OrthoMapT<S>& map, int u, int v,
                                   const OrthoMapT<S>& tpl, MatchMethod method,
                                   const WeightKernel* kernel = nullptr) {
  detail::require_gray(map, "map");
  detail::require_gray(tpl, "template");
  if (method == MatchMethod::kWncc) {
    if (kernel == nullptr) throw std::invalid_argument("weighted matching requires a kernel");
    detail::require_kernel(*kernel, tpl.width(), tpl.height());
  }
  if (u < 0 || v < 0 || u + tpl.width() > map.width() || v + tpl.height() > map.height())
    throw std::out_of_range("window out of bounds");
  const auto st = detail::make_template_stats(tpl, method, kernel);
  const double s = detail::score_at(map, u, v, method, st);
  if (!std::isfinite(s)) return std::nullopt;
  return s;
}

/// Exhaustive sliding-window search over all (W-M+1) x (H-N+1) placements.
/// Degenerate placements receive the method's sentinel and are excluded from
/// the optimum; ties break toward the smallest v, then the smallest u. The
/// score field and result are bit-identical for any worker count.
template <typename S>
MatchResult match_template_parallel(const OrthoMapT<S>& map, const OrthoMapT<S>& tpl,
                                    MatchMethod method, const WeightKernel* kernel, int workers) {
  detail::require_gray(map, "map");
  detail::require_gray(tpl, "template");
  if (tpl.width() > map.width() || tpl.height() > map.height())
    throw std::invalid_argument("template larger than map");
  if (method == MatchMethod::kWncc) {
    if (kernel == nullptr) throw std::invalid_argument("weighted matching requires a kernel");
    detail::require_kernel(*kernel, tpl.width(), tpl.height());
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  const auto st = detail::make_template_stats(tpl, method, kernel);

  ScoreField field;
  field.method = method;
  field.placements_w = map.width() - tpl.width() + 1;
  field.placements_h = map.height() - tpl.height() + 1;
  field.scores.resize(field.placements_h, field.placements_w);

  const auto fill_rows = [&](int v_begin, int v_end) {
    for (int v = v_begin; v < v_end; ++v)
      for (int u = 0; u < field.placements_w; ++u)
        field.scores(v, u) = detail::score_at(map, u, v, method, st);
  };

  if (workers == 1 || field.placements_h == 1) {
    fill_rows(0, field.placements_h);
  } else {
    const int used = std::min(workers, field.placements_h);
    const int chunk = (field.placements_h + used - 1) / used;
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (int k = 0; k < used; ++k) {
      const int lo = k * chunk;
      const int hi = std::min(field.placements_h, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(fill_rows, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  const bool maximize = higher_is_better(method);
  bool found = false;
  MatchResult result;
  for (int v = 0; v < field.placements_h; ++v)
    for (int u = 0; u < field.placements_w; ++u) {
      const double s = field.scores(v, u);
      if (!std::isfinite(s)) continue;
      if (!found || (maximize ? s > result.best_score : s < result.best_score)) {
        found = true;
        result.best_u = u;
        result.best_v = v;
        result.best_score = s;
      }
    }
  if (!found) throw std::runtime_error("all placements degenerate");
  result.field = std::move(field);
  return result;
}

template <typename S>
MatchResult match_template(const OrthoMapT<S>& map, const OrthoMapT<S>& tpl, MatchMethod method,
                           const WeightKernel* kernel = nullptr) {
  return match_template_parallel(map, tpl, method, kernel, 1);
}

}  // namespace ortholoc
