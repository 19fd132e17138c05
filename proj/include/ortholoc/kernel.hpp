#pragma once

#include <Eigen/Dense>

#include <string>

namespace ortholoc {

enum class KernelKind { kPaperLiteral, kCorrected, kUniform };

KernelKind kernel_kind_from_string(const std::string& name);
std::string to_string(KernelKind kind);

/// Per-pixel nonnegative weights of template size, used by the weighted
/// correlation scorer. Weights are stored row-major as an n x m matrix
/// (rows = t, cols = s) matching image indexing.
struct WeightKernel {
  int m = 0;  // width in pixels
  int n = 0;  // height in pixels
  KernelKind kind = KernelKind::kUniform;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights;

  double at(int s, int t) const { return weights(t, s); }  // 0-based
};

/// Builds an m x n weight kernel.
///
/// kPaperLiteral evaluates weight(s,t) = |2 - |M/2 - s| * |N/2 - t|| at
/// 1-based indices s in [1..M], t in [1..N]. Note this surface has value 2 at
/// the template center and grows toward the corners; it is kept for fidelity
/// comparisons, not as a useful center-weighting.
///
/// kCorrected is the center-peaked window the weighted scorer defaults to: a
/// separable triangular (Bartlett) window that is exactly 1 at the center
/// pixel(s), falls off linearly per axis, and reaches exactly 0 at the border
/// ring. For even sizes the underlying window is symmetric about the
/// half-pixel center and is rescaled so the two central samples hit 1.
///
/// kUniform is all-ones.
WeightKernel make_kernel(KernelKind kind, int m, int n);

}  // namespace ortholoc
