#include "metricdiv/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace metricdiv {

PointedFiniteMetricSpace wedge_sum(const PointedFiniteMetricSpace& a,
                                   const PointedFiniteMetricSpace& b) {
  // origin[i] = (part, index within part); part 0 is A, 1 is B.
  std::vector<std::pair<int, std::size_t>> origin;
  std::vector<std::string> labels;
  origin.emplace_back(0, a.basepoint);
  labels.emplace_back("∗");
  for (std::size_t i = 0; i < a.space.size(); ++i) {
    if (i == a.basepoint) continue;
    origin.emplace_back(0, i);
    labels.push_back("A:" + a.space.labels()[i]);
  }
  for (std::size_t i = 0; i < b.space.size(); ++i) {
    if (i == b.basepoint) continue;
    origin.emplace_back(1, i);
    labels.push_back("B:" + b.space.labels()[i]);
  }

  const auto n = static_cast<Eigen::Index>(origin.size());
  Matrix dist = Matrix::Zero(n, n);
  auto to_base = [&](int part, std::size_t i) {
    return part == 0 ? a.space.distance(i, a.basepoint) : b.space.distance(i, b.basepoint);
  };
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      const auto [px, ix] = origin[static_cast<std::size_t>(x)];
      const auto [py, iy] = origin[static_cast<std::size_t>(y)];
      double d;
      if (px == py) {
        d = px == 0 ? a.space.distance(ix, iy) : b.space.distance(ix, iy);
      } else {
        d = to_base(px, ix) + to_base(py, iy);
      }
      dist(x, y) = d;
      dist(y, x) = d;
    }
  }
  return PointedFiniteMetricSpace(validate_metric(dist, std::move(labels)), 0);
}

RealFiniteSet minkowski_sum(const RealFiniteSet& a, const RealFiniteSet& b) {
  std::vector<double> sums;
  sums.reserve(a.size() * b.size());
  for (double x : a.values()) {
    for (double y : b.values()) sums.push_back(x + y);
  }
  return RealFiniteSet::from_unsorted(std::move(sums), kDedupTolerance);
}

RealFiniteSet scale(const RealFiniteSet& a, double c) {
  std::vector<double> xs;
  xs.reserve(a.size());
  for (double x : a.values()) xs.push_back(c * x);
  return RealFiniteSet::from_unsorted(std::move(xs), kDedupTolerance);
}

RealFiniteSet affine_combination(const RealFiniteSet& a, const RealFiniteSet& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::LambdaOutOfRange, "lambda = " + std::to_string(lambda));
  }
  if (lambda == 0.0) return a;
  if (lambda == 1.0) return b;
  return minkowski_sum(scale(a, 1.0 - lambda), scale(b, lambda));
}

IndexSet union_of(const std::vector<IndexSet>& parts) {
  std::set<std::size_t> all;
  for (const auto& part : parts) all.insert(part.begin(), part.end());
  return IndexSet(all.begin(), all.end());
}

FiniteMetricSpace union_subspace(const FiniteMetricSpace& ambient,
                                 const std::vector<IndexSet>& parts) {
  const IndexSet all = union_of(parts);
  for (auto i : all) {
    if (i >= ambient.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i) + " outside a " +
                                                  std::to_string(ambient.size()) + "-point space",
                  {i});
    }
  }
  return ambient.subspace(all);
}

std::vector<IndexSet> disjointify(const std::vector<IndexSet>& parts) {
  std::vector<IndexSet> out;
  out.reserve(parts.size());
  std::set<std::size_t> seen;
  for (const auto& part : parts) {
    IndexSet fresh;
    for (auto i : std::set<std::size_t>(part.begin(), part.end())) {
      if (!seen.contains(i)) fresh.push_back(i);
    }
    seen.insert(part.begin(), part.end());
    out.push_back(std::move(fresh));
  }
  return out;
}

FractionalPartition::FractionalPartition(std::size_t n, std::vector<WeightedSet> beta)
    : n_(n), beta_(std::move(beta)) {
  if (n_ == 0) throw Error(ErrorCode::InvalidPartition, "n must be positive");
  for (auto& ws : beta_) {
    std::sort(ws.set.begin(), ws.set.end());
    if (ws.set.empty() || std::adjacent_find(ws.set.begin(), ws.set.end()) != ws.set.end()) {
      throw Error(ErrorCode::InvalidPartition, "sets must be nonempty without repeats");
    }
    if (ws.set.back() >= n_) {
      throw Error(ErrorCode::InvalidPartition, "element " + std::to_string(ws.set.back()) +
                                                   " outside [0, " + std::to_string(n_) + ")");
    }
    if (!(ws.weight >= 0.0) || !std::isfinite(ws.weight)) {
      throw Error(ErrorCode::InvalidPartition, "weights must be nonnegative");
    }
  }
  if (covering_error() > kPartitionTolerance) {
    throw Error(ErrorCode::InvalidPartition,
                "covering identity off by " + std::to_string(covering_error()));
  }
}

double FractionalPartition::covering_error() const {
  std::vector<double> cover(n_, 0.0);
  for (const auto& ws : beta_) {
    for (auto i : ws.set) cover[i] += ws.weight;
  }
  double worst = 0.0;
  for (double c : cover) worst = std::max(worst, std::abs(c - 1.0));
  return worst;
}

namespace {

void k_subsets(std::size_t n, std::size_t k, std::size_t start, IndexSet& current,
               std::vector<IndexSet>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = start; i + (k - current.size()) <= n; ++i) {
    current.push_back(i);
    k_subsets(n, k, i + 1, current, out);
    current.pop_back();
  }
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * double(n - k + i) / double(i);
  return std::round(c);
}

}  // namespace

FractionalPartition fractional_partition(std::size_t n, const PartitionKind& kind) {
  if (n == 0) throw Error(ErrorCode::InvalidPartition, "n must be positive");
  std::vector<WeightedSet> beta;
  if (std::holds_alternative<partition_kind::Singletons>(kind)) {
    for (std::size_t i = 0; i < n; ++i) beta.push_back({{i}, 1.0});
  } else if (std::holds_alternative<partition_kind::LeaveOneOut>(kind)) {
    if (n < 2) throw Error(ErrorCode::InvalidPartition, "leave-one-out needs n >= 2");
    for (std::size_t skip = 0; skip < n; ++skip) {
      IndexSet s;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != skip) s.push_back(i);
      }
      beta.push_back({std::move(s), 1.0 / double(n - 1)});
    }
  } else if (const auto* uk = std::get_if<partition_kind::UniformK>(&kind)) {
    if (uk->k < 1 || uk->k > n) {
      throw Error(ErrorCode::InvalidPartition, "uniform_k needs 1 <= k <= n");
    }
    std::vector<IndexSet> sets;
    IndexSet current;
    k_subsets(n, uk->k, 0, current, sets);
    const double w = 1.0 / binomial(n - 1, uk->k - 1);
    for (auto& s : sets) beta.push_back({std::move(s), w});
  } else {
    beta = std::get<partition_kind::Explicit>(kind).beta;
  }
  return FractionalPartition(n, std::move(beta));
}

MixtureSpec::MixtureSpec(std::vector<ProbabilityVector> components, std::vector<double> lambdas)
    : components_(std::move(components)), lambdas_(std::move(lambdas)) {
  if (components_.empty() || components_.size() != lambdas_.size()) {
    throw Error(ErrorCode::InvalidMixture, "need one weight per component");
  }
  const std::size_t n = components_.front().size();
  double total = 0.0;
  for (double l : lambdas_) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::InvalidMixture, "mixture weights must be nonnegative");
    }
    total += l;
  }
  if (std::abs(total - 1.0) > kPartitionTolerance) {
    throw Error(ErrorCode::InvalidMixture, "mixture weights sum to " + std::to_string(total));
  }
  std::vector<int> owner(n, -1);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (components_[c].size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "components live on different spaces", {c});
    }
    for (auto i : components_[c].support()) {
      if (owner[i] >= 0) {
        throw Error(ErrorCode::InvalidMixture,
                    "components " + std::to_string(owner[i]) + " and " + std::to_string(c) +
                        " share point " + std::to_string(i),
                    {static_cast<std::size_t>(owner[i]), c, i});
      }
      owner[i] = static_cast<int>(c);
    }
  }
}

ProbabilityVector mixture_complexity_inputs(const MixtureSpec& spec, const IndexSet& s) {
  const auto n = static_cast<Eigen::Index>(spec.components().front().size());
  Vector acc = Vector::Zero(n);
  double mass = 0.0;
  for (auto i : s) {
    if (i >= spec.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(i), {i});
    }
    acc += spec.lambdas()[i] * spec.components()[i].values();
    mass += spec.lambdas()[i];
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMassSubset, "selected components carry no mass");
  return ProbabilityVector(acc / mass);
}

}  // namespace metricdiv
