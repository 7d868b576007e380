#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "detail.hpp"
#include "metricdiv/complexity.hpp"

namespace metricdiv {

namespace detail {

void check_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < 0.0) {
    throw Error(ErrorCode::NegativeAlpha, "alpha = " + std::to_string(alpha));
  }
}

namespace {

// log sum_i p_i exp(e_i) over the support, stable for large |e_i|.
double log_weighted_sum_exp(const Vector& p, const Vector& exponents) {
  double top = -kInfinity;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kSupportTolerance) top = std::max(top, exponents(i));
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kSupportTolerance) acc += p(i) * std::exp(exponents(i) - top);
  }
  return top + std::log(acc);
}

}  // namespace

double log_diversity(const Vector& p, const Matrix& z, double alpha) {
  Vector masked = p;
  for (Eigen::Index i = 0; i < masked.size(); ++i) {
    if (masked(i) <= kSupportTolerance) masked(i) = 0.0;
  }
  const Vector u = z * masked;

  if (alpha == 1.0) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (masked(i) > 0.0) h -= masked(i) * std::log(u(i));
    }
    return h;
  }
  if (std::isinf(alpha)) {
    double top = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (masked(i) > 0.0) top = std::max(top, u(i));
    }
    return -std::log(top);
  }
  Vector exponents = (alpha - 1.0) * u.array().log().matrix();
  return log_weighted_sum_exp(masked, exponents) / (1.0 - alpha);
}

Vector project_to_simplex(const Vector& v) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace detail

double renyi_entropy(const ProbabilityVector& p, double alpha) {
  detail::check_alpha(alpha);
  const auto& support = p.support();
  if (alpha == 1.0) {
    double h = 0.0;
    for (auto i : support) h -= p[i] * std::log(p[i]);
    return h;
  }
  if (std::isinf(alpha)) {
    double top = 0.0;
    for (auto i : support) top = std::max(top, p[i]);
    return -std::log(top);
  }
  // sum p^alpha = sum p * exp((alpha-1) log p), shifted by the largest exponent.
  double shift = -kInfinity;
  for (auto i : support) shift = std::max(shift, (alpha - 1.0) * std::log(p[i]));
  double acc = 0.0;
  for (auto i : support) acc += p[i] * std::exp((alpha - 1.0) * std::log(p[i]) - shift);
  return (shift + std::log(acc)) / (1.0 - alpha);
}

double alpha_complexity(const ProbabilityVector& p, const SimilarityMatrix& z, double alpha) {
  detail::check_alpha(alpha);
  if (p.size() != z.size()) {
    throw Error(ErrorCode::DimensionMismatch, "distribution on " + std::to_string(p.size()) +
                                                  " points, kernel on " +
                                                  std::to_string(z.size()));
  }
  return detail::log_diversity(p.values(), z.z, alpha);
}

}  // namespace metricdiv
