#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "metricdiv/core.hpp"

namespace metricdiv {

/// Collision tolerance when forming sums of reals.
inline constexpr double kDedupTolerance = 1e-9;
/// Allowed error in the covering identity of a fractional partition.
inline constexpr double kPartitionTolerance = 1e-12;

/// Glues A and B at their basepoints. Point order: the glued point (label
/// "∗"), A's other points as "A:<label>", then B's other points as
/// "B:<label>". The glued point is the new basepoint.
PointedFiniteMetricSpace wedge_sum(const PointedFiniteMetricSpace& a,
                                   const PointedFiniteMetricSpace& b);

RealFiniteSet minkowski_sum(const RealFiniteSet& a, const RealFiniteSet& b);

/// c * A; c = 0 collapses A to {0}.
RealFiniteSet scale(const RealFiniteSet& a, double c);

/// (1 - lambda) A + lambda B.
RealFiniteSet affine_combination(const RealFiniteSet& a, const RealFiniteSet& b, double lambda);

/// Sorted union of index sets.
IndexSet union_of(const std::vector<IndexSet>& parts);

/// Induced metric on the union of the parts.
FiniteMetricSpace union_subspace(const FiniteMetricSpace& ambient,
                                 const std::vector<IndexSet>& parts);

/// F~_i = F_i minus the union of F_k for k < i.
std::vector<IndexSet> disjointify(const std::vector<IndexSet>& parts);

struct WeightedSet {
  IndexSet set;
  double weight;
};

/// Nonnegative weights on nonempty subsets of {0, ..., n-1} such that the
/// sets containing any fixed i carry total weight 1.
class FractionalPartition {
 public:
  /// Validates the covering identity (InvalidPartition otherwise).
  FractionalPartition(std::size_t n, std::vector<WeightedSet> beta);

  std::size_t n() const noexcept { return n_; }
  const std::vector<WeightedSet>& beta() const noexcept { return beta_; }

  /// max over i of |sum_{s containing i} beta(s) - 1|.
  double covering_error() const;

 private:
  std::size_t n_;
  std::vector<WeightedSet> beta_;
};

namespace partition_kind {
struct Singletons {};
struct LeaveOneOut {};
struct UniformK {
  std::size_t k;
};
struct Explicit {
  std::vector<WeightedSet> beta;
};
}  // namespace partition_kind

using PartitionKind = std::variant<partition_kind::Singletons, partition_kind::LeaveOneOut,
                                   partition_kind::UniformK, partition_kind::Explicit>;

FractionalPartition fractional_partition(std::size_t n, const PartitionKind& kind);

/// Mixture of probability vectors with pairwise disjoint supports, all on the
/// same ambient space.
class MixtureSpec {
 public:
  MixtureSpec(std::vector<ProbabilityVector> components, std::vector<double> lambdas);

  const std::vector<ProbabilityVector>& components() const noexcept { return components_; }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  std::size_t size() const noexcept { return components_.size(); }

 private:
  std::vector<ProbabilityVector> components_;
  std::vector<double> lambdas_;
};

/// Renormalized sub-mixture over the component indices in s.
ProbabilityVector mixture_complexity_inputs(const MixtureSpec& spec, const IndexSet& s);

}  // namespace metricdiv
