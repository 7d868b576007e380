#include "metricdiv/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace metricdiv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::NegativeAlpha: return "NegativeAlpha";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoPositiveSubset: return "NoPositiveSubset";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidSet: return "InvalidSet";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidMixture: return "InvalidMixture";
    case ErrorCode::ZeroMassSubset: return "ZeroMassSubset";
    case ErrorCode::InvalidBasepoint: return "InvalidBasepoint";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string pair_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

FiniteMetricSpace validate_metric(const Matrix& matrix, std::vector<std::string> labels,
                                  double tolerance) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorCode::NotSquare, "distance matrix is " + std::to_string(matrix.rows()) +
                                          "x" + std::to_string(matrix.cols()));
  }
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != n) {
    throw Error(ErrorCode::LabelMismatch, std::to_string(labels.size()) + " labels for " +
                                              std::to_string(n) + " points");
  }

  auto d = [&](std::size_t i, std::size_t j) {
    return matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(d(i, j))) {
        throw Error(ErrorCode::NonFinite, "entry " + pair_text(i, j) + " is not finite", {i, j});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) {
      throw Error(ErrorCode::NonzeroDiagonal, "d" + pair_text(i, i) + " != 0", {i});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) != d(j, i)) {
        throw Error(ErrorCode::Asymmetric, "d" + pair_text(i, j) + " != d" + pair_text(j, i),
                    {i, j});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(d(i, j) > 0.0)) {
        throw Error(ErrorCode::NonpositiveOffDiagonal, "d" + pair_text(i, j) + " <= 0", {i, j});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double via = d(i, j) + d(j, k);
        if (d(i, k) > via * (1.0 + tolerance)) {
          throw Error(ErrorCode::TriangleViolation,
                      "d(" + std::to_string(i) + ", " + std::to_string(k) + ") > d(" +
                          std::to_string(i) + ", " + std::to_string(j) + ") + d(" +
                          std::to_string(j) + ", " + std::to_string(k) + ")",
                      {i, k, j});
        }
      }
    }
  }
  return FiniteMetricSpace(std::move(labels), matrix);
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Matrix sub(m, m);
  std::vector<std::string> names;
  names.reserve(indices.size());
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto i = indices[static_cast<std::size_t>(a)];
    if (i >= size()) {
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i) + " >= " +
                                                  std::to_string(size()), {i});
    }
    names.push_back(labels_[i]);
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto j = indices[static_cast<std::size_t>(b)];
      if (j >= size()) {
        throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(j), {j});
      }
      sub(a, b) = dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      if (sub(a, b) == 0.0) {
        throw Error(ErrorCode::DuplicatePoints, "repeated index in subspace");
      }
    }
  }
  return FiniteMetricSpace(std::move(names), std::move(sub));
}

FiniteMetricSpace FiniteMetricSpace::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::NonpositiveScale, "scale factor " + std::to_string(factor));
  }
  return FiniteMetricSpace(labels_, dist_ * factor);
}

double FiniteMetricSpace::min_distance() const {
  double best = kInfinity;
  for (Eigen::Index i = 0; i < dist_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < dist_.cols(); ++j) best = std::min(best, dist_(i, j));
  }
  return best;
}

PointedFiniteMetricSpace::PointedFiniteMetricSpace(FiniteMetricSpace s, std::size_t base)
    : space(std::move(s)), basepoint(base) {
  if (basepoint >= space.size()) {
    throw Error(ErrorCode::InvalidBasepoint, "basepoint " + std::to_string(basepoint) +
                                                 " outside a space of " +
                                                 std::to_string(space.size()) + " points");
  }
}

SimilarityMatrix laplace_kernel(const FiniteMetricSpace& space, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::NonpositiveScale, "t = " + std::to_string(t));
  }
  SimilarityMatrix out;
  out.scale = t;
  out.z = (-t * space.distances().array()).exp().matrix();
  out.z.diagonal().setOnes();
  return out;
}

SimilarityMatrix kronecker_kernel(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return SimilarityMatrix{Matrix::Identity(m, m), kInfinity};
}

Norm parse_norm(const std::string& name) {
  if (name == "euclidean") return Norm::Euclidean;
  if (name == "l1") return Norm::L1;
  if (name == "linf") return Norm::LInf;
  throw Error(ErrorCode::UnknownMetric, "'" + name + "' (expected euclidean, l1 or linf)");
}

std::string to_string(Norm norm) {
  switch (norm) {
    case Norm::Euclidean: return "euclidean";
    case Norm::L1: return "l1";
    case Norm::LInf: return "linf";
  }
  return "euclidean";
}

FiniteMetricSpace metric_from_points(const std::vector<std::vector<double>>& points, Norm norm,
                                     std::vector<std::string> labels) {
  const std::size_t n = points.size();
  const std::size_t dim = n == 0 ? 0 : points.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " has dimension " +
                                                    std::to_string(points[i].size()) +
                                                    ", expected " + std::to_string(dim),
                  {i});
    }
    for (double c : points[i]) {
      if (!std::isfinite(c)) {
        throw Error(ErrorCode::NonFinite, "point " + std::to_string(i), {i});
      }
    }
  }
  const auto m = static_cast<Eigen::Index>(n);
  Matrix dist = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = std::abs(points[i][c] - points[j][c]);
        switch (norm) {
          case Norm::Euclidean: acc += diff * diff; break;
          case Norm::L1: acc += diff; break;
          case Norm::LInf: acc = std::max(acc, diff); break;
        }
      }
      if (norm == Norm::Euclidean) acc = std::sqrt(acc);
      if (acc == 0.0) {
        throw Error(ErrorCode::DuplicatePoints,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                    {i, j});
      }
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
      dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = acc;
    }
  }
  return validate_metric(dist, std::move(labels));
}

ProbabilityVector::ProbabilityVector(Vector p) : p_(std::move(p)) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_(i)) || p_(i) < 0.0) {
      throw Error(ErrorCode::InvalidProbability,
                  "entry " + std::to_string(i) + " = " + std::to_string(p_(i)),
                  {static_cast<std::size_t>(i)});
    }
    total += p_(i);
    if (p_(i) > kSupportTolerance) support_.push_back(static_cast<std::size_t>(i));
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::InvalidProbability, "total mass " + std::to_string(total));
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidProbability, "no points");
  return ProbabilityVector(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / double(n)));
}

ProbabilityVector ProbabilityVector::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw Error(ErrorCode::IndexOutOfRange, "point mass index", {at});
  Vector p = Vector::Zero(static_cast<Eigen::Index>(n));
  p(static_cast<Eigen::Index>(at)) = 1.0;
  return ProbabilityVector(std::move(p));
}

RealFiniteSet::RealFiniteSet(std::vector<double> xs) : xs_(std::move(xs)) {
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i])) throw Error(ErrorCode::NonFinite, "coordinate", {i});
    if (i > 0 && !(xs_[i - 1] < xs_[i])) {
      throw Error(ErrorCode::InvalidSet, "coordinates must be strictly increasing", {i});
    }
  }
}

RealFiniteSet RealFiniteSet::from_unsorted(std::vector<double> xs, double tolerance) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> kept;
  kept.reserve(xs.size());
  for (double x : xs) {
    if (kept.empty() || x - kept.back() > tolerance) kept.push_back(x);
  }
  return RealFiniteSet(std::move(kept));
}

FiniteMetricSpace RealFiniteSet::to_metric_space() const {
  const auto n = static_cast<Eigen::Index>(xs_.size());
  Matrix dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      dist(i, j) = std::abs(xs_[static_cast<std::size_t>(i)] - xs_[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<std::string> names;
  names.reserve(xs_.size());
  for (std::size_t i = 0; i < xs_.size(); ++i) names.push_back(std::to_string(i));
  return validate_metric(dist, std::move(names));
}

RealCompactSet::RealCompactSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw Error(ErrorCode::InvalidSet, "interval " + std::to_string(i) + " is malformed", {i});
    }
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) {
      throw Error(ErrorCode::InvalidSet, "intervals must be sorted and disjoint", {i});
    }
  }
}

double RealCompactSet::total_length() const {
  return std::accumulate(intervals_.begin(), intervals_.end(), 0.0,
                         [](double acc, const Interval& iv) { return acc + (iv.hi - iv.lo); });
}

std::vector<double> RealCompactSet::gaps() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    out.push_back(intervals_[i].lo - intervals_[i - 1].hi);
  }
  return out;
}

}  // namespace metricdiv
