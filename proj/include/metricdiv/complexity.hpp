#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "metricdiv/core.hpp"

namespace metricdiv {

/// Default cap on the number of points handled by subset enumeration.
inline constexpr std::size_t kDefaultMaxPoints = 22;
/// Weighting entries must exceed this for a subset to count as positive.
inline constexpr double kPositivityTolerance = 1e-12;
/// Residual bound on ||Zw - 1||_inf for an accepted linear solve.
inline constexpr double kSolveTolerance = 1e-8;
/// Tolerance on the optimality certificate of a maximizing distribution.
inline constexpr double kCertificateTolerance = 1e-8;
/// Frank-Wolfe duality gap that must be reached on the quadratic path.
inline constexpr double kOracleGapTolerance = 1e-9;

// Entropies and complexities are in nats. alpha = kInfinity selects the
// min-entropy branch.

double renyi_entropy(const ProbabilityVector& p, double alpha);

/// Similarity-sensitive complexity of order alpha of p under Z.
double alpha_complexity(const ProbabilityVector& p, const SimilarityMatrix& z, double alpha);

/// Solves Z w = 1. Throws Singular when the system is rank deficient or the
/// residual exceeds kSolveTolerance.
WeightVector weighting(const SimilarityMatrix& z);

/// Sum of the weighting of the Laplace kernel at scale t.
double magnitude(const FiniteMetricSpace& space, double t);

struct DiversityResult {
  double diversity = 1.0;   // D = exp C
  double complexity = 0.0;  // C = log D
  double kappa = 0.0;       // D - 1
  ProbabilityVector maximizer;
  IndexSet support;
  // min over all points of (Zp)(x) - 1/D; nonnegative for a global maximizer.
  double certificate_gap = 0.0;
  // max over the support of |(Zp)(x) - 1/D|.
  double support_residual = 0.0;
  std::size_t singular_subsets = 0;
};

/// The certificate conditions, both at tolerance tol.
bool certificate_holds(const DiversityResult& result, double tol = kCertificateTolerance);

struct EnumerationOptions {
  std::size_t max_points = kDefaultMaxPoints;
  unsigned workers = 1;
};

/// Maximum diversity by enumerating every nonempty subset with a strictly
/// positive weighting and keeping the largest magnitude. Ties go to the
/// lexicographically smallest index set, so the result does not depend on
/// the number of workers.
DiversityResult max_diversity_exact(const FiniteMetricSpace& space, double t,
                                    const EnumerationOptions& options = {});

/// Builds the result (maximizer, certificate) for a known optimal support.
DiversityResult diversity_from_support(const SimilarityMatrix& z, const IndexSet& support);

struct OracleOptions {
  std::size_t iterations = 200000;
  std::uint64_t seed = 1;
  std::size_t restarts = 8;
};

/// Numerical maximum of exp H^Z_alpha over the simplex. A lower bound on the
/// maximum diversity; tight for alpha = 2 when Z is positive definite.
double simplex_oracle(const FiniteMetricSpace& space, double t, double alpha,
                      const OracleOptions& options = {});

struct ProfileEntry {
  double t;
  double diversity;
  double complexity;
  double kappa;
};

struct ComplexityProfile {
  std::vector<ProfileEntry> entries;
};

ComplexityProfile complexity_profile(const FiniteMetricSpace& space,
                                     const std::vector<double>& t_grid,
                                     const EnumerationOptions& options = {});

/// n evenly spaced values from t_min to t_max inclusive.
std::vector<double> linear_grid(double t_min, double t_max, std::size_t steps);

/// Closed form 1 + t*length/2 + sum over gaps of tanh(t*gap/2).
double real_set_diversity(const RealCompactSet& e, double t);

/// Interval endpoints plus lo + k*spacing grid points inside each interval.
RealFiniteSet epsilon_net(const RealCompactSet& e, double spacing);

/// Largest net size that the dense weighting fallback accepts.
inline constexpr std::size_t kMaxNetPoints = 6000;

/// Maximum diversity of the epsilon net. Nets beyond options.max_points use
/// the magnitude of the full net, which requires a positive weighting.
double epsilon_net_diversity(const RealCompactSet& e, double t, double spacing,
                             const EnumerationOptions& options = {});

}  // namespace metricdiv
