#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metricdiv/error.hpp"

namespace metricdiv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Sorted, duplicate-free list of point indices.
using IndexSet = std::vector<std::size_t>;

/// Relative slack allowed in the triangle inequality of floating input.
inline constexpr double kMetricTolerance = 1e-9;
/// Probability entries at or below this are exact zeros.
inline constexpr double kSupportTolerance = 1e-12;
/// Allowed deviation of a probability vector's total mass from 1.
inline constexpr double kSimplexTolerance = 1e-9;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A finite metric space given by its distance matrix. Instances can only be
/// obtained through validate_metric (or derived from an already valid space),
/// so every live object satisfies the metric axioms.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Matrix& distances() const noexcept { return dist_; }
  double distance(std::size_t i, std::size_t j) const { return dist_(i, j); }

  /// Induced metric on the given indices, in the given order.
  FiniteMetricSpace subspace(std::span<const std::size_t> indices) const;

  /// Same points with every distance multiplied by factor > 0.
  FiniteMetricSpace scaled(double factor) const;

  /// Smallest off-diagonal distance (infinity for fewer than two points).
  double min_distance() const;

 private:
  friend FiniteMetricSpace validate_metric(const Matrix&, std::vector<std::string>, double);
  FiniteMetricSpace(std::vector<std::string> labels, Matrix dist)
      : labels_(std::move(labels)), dist_(std::move(dist)) {}

  std::vector<std::string> labels_;
  Matrix dist_;
};

/// Checks the metric axioms and returns the validated space. Missing labels
/// default to "0", "1", ... Throws Error with the first violated axiom:
/// NotSquare, NonFinite, NonzeroDiagonal, Asymmetric (i, j),
/// NonpositiveOffDiagonal (i, j) or TriangleViolation (i, k, j) meaning
/// d(i,k) > d(i,j) + d(j,k).
FiniteMetricSpace validate_metric(const Matrix& matrix,
                                  std::vector<std::string> labels = {},
                                  double tolerance = kMetricTolerance);

struct PointedFiniteMetricSpace {
  PointedFiniteMetricSpace(FiniteMetricSpace space, std::size_t basepoint);

  FiniteMetricSpace space;
  std::size_t basepoint;
};

/// Similarity kernel matrix. scale is t for a Laplace kernel and +infinity
/// for the Kronecker kernel (the t -> infinity limit).
struct SimilarityMatrix {
  Matrix z;
  double scale = 1.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(z.rows()); }
};

SimilarityMatrix laplace_kernel(const FiniteMetricSpace& space, double t);
SimilarityMatrix kronecker_kernel(std::size_t n);

enum class Norm { Euclidean, L1, LInf };

Norm parse_norm(const std::string& name);
std::string to_string(Norm norm);

FiniteMetricSpace metric_from_points(const std::vector<std::vector<double>>& points,
                                     Norm norm,
                                     std::vector<std::string> labels = {});

class ProbabilityVector {
 public:
  ProbabilityVector() = default;

  /// Validates nonnegativity and unit mass (within kSimplexTolerance).
  explicit ProbabilityVector(Vector p);

  static ProbabilityVector uniform(std::size_t n);
  static ProbabilityVector point_mass(std::size_t n, std::size_t at);

  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
  const Vector& values() const noexcept { return p_; }
  double operator[](std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }
  const IndexSet& support() const noexcept { return support_; }

 private:
  Vector p_;
  IndexSet support_;
};

struct WeightVector {
  Vector w;
  double residual = 0.0;  // max-norm of Zw - 1

  double total() const { return w.sum(); }
};

/// Finite subset of the real line, strictly increasing.
class RealFiniteSet {
 public:
  RealFiniteSet() = default;
  explicit RealFiniteSet(std::vector<double> xs);

  /// Sorts and merges values closer than tolerance (keeping the smallest).
  static RealFiniteSet from_unsorted(std::vector<double> xs, double tolerance);

  const std::vector<double>& values() const noexcept { return xs_; }
  std::size_t size() const noexcept { return xs_.size(); }
  bool empty() const noexcept { return xs_.empty(); }

  FiniteMetricSpace to_metric_space() const;

 private:
  std::vector<double> xs_;
};

struct Interval {
  double lo;
  double hi;
};

/// Finite union of disjoint closed intervals (points allowed), sorted.
class RealCompactSet {
 public:
  RealCompactSet() = default;
  explicit RealCompactSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  double total_length() const;
  std::vector<double> gaps() const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace metricdiv
