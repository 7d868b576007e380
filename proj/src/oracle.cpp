#include <algorithm>
#include <cmath>
#include <vector>

#include "detail.hpp"
#include "metricdiv/complexity.hpp"
#include "metricdiv/random.hpp"

namespace metricdiv {

namespace {

// Stop tightening once the Frank-Wolfe gap reaches this.
constexpr double kGapFloor = 1e-14;
// Exponents in the scaled power sums are clamped here to keep gradients finite.
constexpr double kExponentClamp = 50.0;
// Orders visited by the continuation that drives the alpha = infinity search.
constexpr double kContinuationOrders[] = {2.0, 8.0, 32.0, 128.0};

struct QuadraticRun {
  Vector p;
  double value;  // p^T Z p
  double gap;
};

// Away-step Frank-Wolfe with exact line search for min p^T Z p on the simplex.
QuadraticRun minimize_quadratic(const Matrix& z, Vector p, std::size_t iterations) {
  const Eigen::Index n = z.rows();
  Vector u = z * p;
  double gap = kInfinity;
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    if (it % 256 == 0) u = z * p;
    Eigen::Index s = 0;
    u.minCoeff(&s);
    Eigen::Index v = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p(i) > 0.0 && (v < 0 || u(i) > u(v))) v = i;
    }
    const double pu = p.dot(u);
    gap = 2.0 * (pu - u(s));
    if (gap <= kGapFloor) break;

    const double toward_gain = pu - u(s);
    const double away_gain = u(v) - pu;
    double step = 0.0;
    if (toward_gain >= away_gain) {
      const double slope = u(s) - pu;
      const double curvature = z(s, s) - 2.0 * u(s) + pu;
      step = curvature > 0.0 ? std::min(1.0, -slope / curvature) : 1.0;
      p *= (1.0 - step);
      p(s) += step;
      u = (1.0 - step) * u + step * z.col(s);
    } else {
      const double limit = p(v) / (1.0 - p(v));
      const double slope = pu - u(v);
      const double curvature = pu - 2.0 * u(v) + z(v, v);
      step = curvature > 0.0 ? std::min(limit, -slope / curvature) : limit;
      p *= (1.0 + step);
      p(v) -= step;
      if (step == limit) p(v) = 0.0;
      u = (1.0 + step) * u - step * z.col(v);
    }
    stalled = step > 0.0 ? 0 : stalled + 1;
    if (stalled > 50) break;
  }
  p = p.cwiseMax(0.0);
  p /= p.sum();
  return {p, p.dot(z * p), gap};
}

Vector log_diversity_gradient(const Vector& p, const Matrix& z, double alpha) {
  const Vector u = z * p;
  if (alpha == 1.0) {
    const Vector ratio = p.cwiseQuotient(u);
    return -(u.array().log().matrix() + z * ratio);
  }
  const Vector e = (alpha - 1.0) * u.array().log().matrix();
  double top = -kInfinity;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kSupportTolerance) top = std::max(top, e(i));
  }
  const Vector scaled = (e.array() - top).min(kExponentClamp).exp().matrix();
  double mass = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kSupportTolerance) mass += p(i) * scaled(i);
  }
  const Vector inner = p.cwiseProduct(scaled).cwiseQuotient(u);
  return (scaled + (alpha - 1.0) * (z * inner)) / (mass * (1.0 - alpha));
}

// Projected gradient ascent with Armijo backtracking on log D_alpha.
Vector ascend(const Matrix& z, double alpha, Vector p, std::size_t iterations) {
  double value = detail::log_diversity(p, z, alpha);
  double step = 1.0;
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const Vector g = log_diversity_gradient(p, z, alpha);
    bool accepted = false;
    Vector q;
    double next = value;
    while (step > 1e-30) {
      q = detail::project_to_simplex(p + step * g);
      const double predicted = g.dot(q - p);
      if ((q - p).lpNorm<Eigen::Infinity>() < 1e-16) break;
      next = detail::log_diversity(q, z, alpha);
      if (next >= value + 1e-4 * predicted && next >= value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double gain = next - value;
    p = q;
    value = next;
    step = std::min(step * 2.0, 1e8);
    stalled = gain <= 1e-15 * (1.0 + std::abs(value)) ? stalled + 1 : 0;
    if (stalled > 20) break;
  }
  return p;
}

std::vector<Vector> starting_points(std::size_t n, const OracleOptions& options) {
  std::vector<Vector> starts;
  starts.push_back(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / double(n)));
  Rng rng(options.seed);
  for (std::size_t r = 0; r < options.restarts; ++r) starts.push_back(rng.dirichlet(n));
  return starts;
}

double quadratic_oracle(const Matrix& z, const OracleOptions& options) {
  const auto n = static_cast<std::size_t>(z.rows());
  const bool convex = Eigen::LLT<Matrix>(z).info() == Eigen::Success;
  std::vector<Vector> starts = starting_points(n, options);
  if (convex) starts.resize(1);

  QuadraticRun best{Vector(), kInfinity, kInfinity};
  for (auto& start : starts) {
    QuadraticRun run = minimize_quadratic(z, std::move(start), options.iterations);
    if (run.value < best.value) best = std::move(run);
  }
  if (best.gap > kOracleGapTolerance) {
    throw Error(ErrorCode::NonConvergence,
                "Frank-Wolfe gap " + std::to_string(best.gap) + " after " +
                    std::to_string(options.iterations) + " iterations");
  }
  return 1.0 / best.value;
}

}  // namespace

double simplex_oracle(const FiniteMetricSpace& space, double t, double alpha,
                      const OracleOptions& options) {
  detail::check_alpha(alpha);
  const std::size_t n = space.size();
  if (n == 0) throw Error(ErrorCode::EmptySet, "oracle on an empty space");
  if (n == 1) return 1.0;
  const SimilarityMatrix z = laplace_kernel(space, t);
  if (alpha == 2.0) return quadratic_oracle(z.z, options);

  double best = -kInfinity;
  for (Vector p : starting_points(n, options)) {
    if (std::isinf(alpha)) {
      for (double order : kContinuationOrders) {
        p = ascend(z.z, order, std::move(p), options.iterations);
        best = std::max(best, detail::log_diversity(p, z.z, alpha));
      }
    } else {
      p = ascend(z.z, alpha, std::move(p), options.iterations);
      best = std::max(best, detail::log_diversity(p, z.z, alpha));
    }
  }
  return std::exp(best);
}

}  // namespace metricdiv
