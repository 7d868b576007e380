#include <cmath>
#include <vector>

#include "metricdiv/complexity.hpp"

namespace metricdiv {

namespace {

// Net points closer than this to an interval's right end are dropped in
// favour of the endpoint itself.
constexpr double kNetMergeTolerance = 1e-9;

}  // namespace

double real_set_diversity(const RealCompactSet& e, double t) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "closed form needs a nonempty set");
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::NonpositiveScale, "t = " + std::to_string(t));
  }
  double d = 1.0 + t * e.total_length() / 2.0;
  for (double g : e.gaps()) d += std::tanh(t * g / 2.0);
  return d;
}

RealFiniteSet epsilon_net(const RealCompactSet& e, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidGrid, "spacing = " + std::to_string(spacing));
  }
  std::vector<double> xs;
  for (const auto& iv : e.intervals()) {
    // Grid points lo + k*spacing; halving the spacing yields a superset.
    for (std::size_t k = 0;; ++k) {
      const double x = iv.lo + static_cast<double>(k) * spacing;
      if (x >= iv.hi - kNetMergeTolerance) break;
      xs.push_back(x);
    }
    xs.push_back(iv.hi);
  }
  return RealFiniteSet(std::move(xs));
}

double epsilon_net_diversity(const RealCompactSet& e, double t, double spacing,
                             const EnumerationOptions& options) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "epsilon net of an empty set");
  const RealFiniteSet net = epsilon_net(e, spacing);
  if (net.size() <= options.max_points) {
    return max_diversity_exact(net.to_metric_space(), t, options).diversity;
  }
  if (net.size() > kMaxNetPoints) {
    throw Error(ErrorCode::TooLarge, "net of " + std::to_string(net.size()) +
                                         " points exceeds " + std::to_string(kMaxNetPoints),
                {net.size(), kMaxNetPoints});
  }
  const WeightVector w = weighting(laplace_kernel(net.to_metric_space(), t));
  if (w.w.minCoeff() <= kPositivityTolerance) {
    throw Error(ErrorCode::TooLarge, "net exceeds the enumeration cap and its weighting is not "
                                     "positive",
                {net.size(), options.max_points});
  }
  return w.total();
}

}  // namespace metricdiv
