#include "ortholoc/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace ortholoc {

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "paper-literal") return KernelKind::kPaperLiteral;
  if (name == "corrected") return KernelKind::kCorrected;
  if (name == "uniform") return KernelKind::kUniform;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kPaperLiteral:
      return "paper-literal";
    case KernelKind::kCorrected:
      return "corrected";
    case KernelKind::kUniform:
      return "uniform";
  }
  return "?";
}

namespace {

// Zero-ended triangular ramp along one axis, 1-based index in [1..size].
// Peaks next to the geometric center (size+1)/2 and is exactly 0 at 1 and size.
// Sizes 1 and 2 have no interior, so the ramp degenerates to all-ones there.
double triangular_axis(int idx, int size) {
  if (size <= 2) return 1.0;
  const double center = 0.5 * (size + 1);
  const double half = 0.5 * (size - 1);
  const double v = 1.0 - std::abs(idx - center) / half;
  return v < 0.0 ? 0.0 : v;
}

}  // namespace

WeightKernel make_kernel(KernelKind kind, int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("kernel dimensions must be >= 1");
  WeightKernel k;
  k.m = m;
  k.n = n;
  k.kind = kind;
  k.weights.resize(n, m);

  switch (kind) {
    case KernelKind::kUniform:
      k.weights.setOnes();
      break;
    case KernelKind::kPaperLiteral:
      for (int t = 1; t <= n; ++t)
        for (int s = 1; s <= m; ++s)
          k.weights(t - 1, s - 1) =
              std::abs(2.0 - std::abs(0.5 * m - s) * std::abs(0.5 * n - t));
      break;
    case KernelKind::kCorrected: {
      // normalize by the on-grid peak so the central sample(s) are exactly 1
      const int s_peak = (m + 1) / 2;
      const int t_peak = (n + 1) / 2;
      const double peak = triangular_axis(s_peak, m) * triangular_axis(t_peak, n);
      for (int t = 1; t <= n; ++t)
        for (int s = 1; s <= m; ++s)
          k.weights(t - 1, s - 1) = triangular_axis(s, m) * triangular_axis(t, n) / peak;
      break;
    }
  }
  return k;
}

}  // namespace ortholoc
