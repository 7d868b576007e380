#pragma once

// Independent reference computations used as test oracles. Nothing here calls
// into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "metricdiv/core.hpp"

namespace testing {

using Rows = std::vector<std::vector<double>>;

inline metricdiv::FiniteMetricSpace line(const std::vector<double>& xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return metricdiv::metric_from_points(pts, metricdiv::Norm::Euclidean);
}

inline metricdiv::FiniteMetricSpace from_rows(const Rows& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  metricdiv::Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return metricdiv::validate_metric(m);
}

inline Rows kernel_rows(const metricdiv::FiniteMetricSpace& s, double t) {
  Rows z(s.size(), std::vector<double>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) z[i][j] = std::exp(-t * s.distance(i, j));
  }
  return z;
}

/// Gaussian elimination with partial pivoting; empty result if singular.
inline std::vector<double> gauss_solve(Rows a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-13) return {};
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline double ref_magnitude(const metricdiv::FiniteMetricSpace& s, double t) {
  const auto w = gauss_solve(kernel_rows(s, t), std::vector<double>(s.size(), 1.0));
  double total = 0.0;
  for (double v : w) total += v;
  return w.empty() ? std::numeric_limits<double>::quiet_NaN() : total;
}

/// Maximum over subsets with a positive weighting, by plain bitmask loop.
inline double ref_max_diversity(const metricdiv::FiniteMetricSpace& s, double t) {
  const std::size_t n = s.size();
  const Rows z = kernel_rows(s, t);
  double best = 1.0;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1ul) idx.push_back(i);
    }
    Rows sub(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = z[idx[i]][idx[j]];
    }
    const auto w = gauss_solve(sub, std::vector<double>(idx.size(), 1.0));
    if (w.empty()) continue;
    double total = 0.0;
    bool positive = true;
    for (double v : w) {
      positive = positive && v > 1e-12;
      total += v;
    }
    if (positive) best = std::max(best, total);
  }
  return best;
}

/// exp of the kernelized alpha-complexity, straight from the three-case formula.
inline double ref_alpha_diversity(const Rows& z, const std::vector<double>& p, double alpha) {
  const std::size_t n = p.size();
  std::vector<double> zp(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) zp[i] += z[i][j] * p[j];
  }
  if (std::isinf(alpha)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] > 1e-12) m = std::max(m, zp[i]);
    }
    return 1.0 / m;
  }
  if (alpha == 1.0) {
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] > 1e-12) h -= p[i] * std::log(zp[i]);
    }
    return std::exp(h);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 1e-12) s += p[i] * std::pow(zp[i], alpha - 1.0);
  }
  return std::pow(s, 1.0 / (1.0 - alpha));
}

/// Best value of ref_alpha_diversity over a simplex grid (n <= 3), refined by
/// repeatedly re-gridding a shrinking window around the incumbent.
inline double ref_grid_diversity(const metricdiv::FiniteMetricSpace& s, double t, double alpha,
                                 int steps) {
  const Rows z = kernel_rows(s, t);
  const std::size_t n = s.size();
  if (n == 1) return ref_alpha_diversity(z, {1.0}, alpha);
  double best = 0.0;
  double bx = 1.0 / 3.0, by = 1.0 / 3.0;
  auto visit = [&](double x, double y) {
    x = std::clamp(x, 0.0, 1.0);
    y = n == 2 ? 1.0 - x : std::clamp(y, 0.0, 1.0 - x);
    const std::vector<double> p = n == 2 ? std::vector<double>{x, y}
                                         : std::vector<double>{x, y, std::max(0.0, 1.0 - x - y)};
    const double v = ref_alpha_diversity(z, p, alpha);
    if (v > best) {
      best = v;
      bx = x;
      by = y;
    }
  };
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) visit(static_cast<double>(a) / steps, static_cast<double>(b) / steps);
  }
  double radius = 2.0 / steps;
  for (int round = 0; round < 12; ++round) {
    const double cx = bx, cy = by;
    for (int a = -20; a <= 20; ++a) {
      for (int b = -20; b <= 20; ++b) visit(cx + radius * a / 20.0, cy + radius * b / 20.0);
    }
    radius /= 4.0;
  }
  return best;
}

/// 1 + sum of tanh(t * gap / 2) for a finite subset of the line.
inline double ref_line_diversity(std::vector<double> xs, double t) {
  std::sort(xs.begin(), xs.end());
  double d = 1.0;
  for (std::size_t i = 1; i < xs.size(); ++i) d += std::tanh(t * (xs[i] - xs[i - 1]) / 2.0);
  return d;
}

}  // namespace testing
