#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "metricdiv/complexity.hpp"

namespace metricdiv {

namespace {

// Reciprocal condition estimate below which a system counts as rank deficient.
constexpr double kRcondFloor = 1e-14;

bool residual_ok(const Matrix& z, const Vector& w, double* residual) {
  if (!w.allFinite()) return false;
  *residual = (z * w - Vector::Ones(w.size())).lpNorm<Eigen::Infinity>();
  return *residual <= kSolveTolerance;
}

}  // namespace

WeightVector weighting(const SimilarityMatrix& z) {
  if (z.z.rows() != z.z.cols()) {
    throw Error(ErrorCode::NotSquare, "similarity matrix is not square");
  }
  if (z.z.rows() == 0) throw Error(ErrorCode::EmptySet, "weighting of an empty space");
  Eigen::PartialPivLU<Matrix> lu(z.z);
  WeightVector out;
  if (lu.rcond() < kRcondFloor) {
    throw Error(ErrorCode::Singular, "similarity matrix is numerically singular");
  }
  out.w = lu.solve(Vector::Ones(z.z.rows()));
  if (!residual_ok(z.z, out.w, &out.residual)) {
    throw Error(ErrorCode::Singular, "residual " + std::to_string(out.residual) +
                                         " exceeds tolerance");
  }
  return out;
}

double magnitude(const FiniteMetricSpace& space, double t) {
  return weighting(laplace_kernel(space, t)).total();
}

bool certificate_holds(const DiversityResult& result, double tol) {
  return result.support_residual <= tol && result.certificate_gap >= -tol;
}

DiversityResult diversity_from_support(const SimilarityMatrix& z, const IndexSet& support) {
  const auto n = static_cast<Eigen::Index>(z.size());
  const auto k = static_cast<Eigen::Index>(support.size());
  SimilarityMatrix sub{Matrix(k, k), z.scale};
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      sub.z(a, b) = z.z(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)]),
                        static_cast<Eigen::Index>(support[static_cast<std::size_t>(b)]));
    }
  }
  const WeightVector w = weighting(sub);
  const double total = w.total();

  Vector p = Vector::Zero(n);
  for (Eigen::Index a = 0; a < k; ++a) {
    p(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)])) = w.w(a) / total;
  }
  const Vector u = z.z * p;

  DiversityResult out;
  out.diversity = total;
  out.complexity = std::log(total);
  out.kappa = total - 1.0;
  out.support = support;
  out.certificate_gap = (u.array() - 1.0 / total).minCoeff();
  out.support_residual = 0.0;
  for (auto i : support) {
    out.support_residual =
        std::max(out.support_residual, std::abs(u(static_cast<Eigen::Index>(i)) - 1.0 / total));
  }
  // p sums to one up to rounding; renormalizing keeps the simplex check honest.
  out.maximizer = ProbabilityVector(p / p.sum());
  return out;
}

namespace {

IndexSet indices_of(std::uint64_t mask) {
  IndexSet out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

struct Candidate {
  double value = -kInfinity;
  std::uint64_t mask = 0;
  std::size_t singular = 0;
};

// True if a should replace b as the running maximum.
bool better(double value_a, std::uint64_t mask_a, double value_b, std::uint64_t mask_b) {
  if (value_a != value_b) return value_a > value_b;
  const IndexSet ia = indices_of(mask_a);
  const IndexSet ib = indices_of(mask_b);
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

// Scans masks in [first, last) and returns the best positive subset.
Candidate scan_subsets(const Matrix& z, std::uint64_t first, std::uint64_t last) {
  const auto n = static_cast<std::size_t>(z.rows());
  // One solver and buffer per subset size.
  std::vector<Matrix> buffers;
  std::vector<Eigen::PartialPivLU<Matrix>> solvers;
  buffers.reserve(n + 1);
  solvers.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    buffers.emplace_back(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    solvers.emplace_back(static_cast<Eigen::Index>(k));
  }
  std::vector<Eigen::Index> idx;
  idx.reserve(n);

  Candidate best;
  for (std::uint64_t mask = first; mask < last; ++mask) {
    idx.clear();
    for (std::uint64_t m = mask; m != 0; m &= m - 1) idx.push_back(std::countr_zero(m));
    const std::size_t k = idx.size();
    const auto kk = static_cast<Eigen::Index>(k);
    Matrix& sub = buffers[k];
    for (Eigen::Index a = 0; a < kk; ++a) {
      for (Eigen::Index b = 0; b < kk; ++b) sub(a, b) = z(idx[std::size_t(a)], idx[std::size_t(b)]);
    }
    auto& lu = solvers[k];
    lu.compute(sub);
    if (lu.rcond() < kRcondFloor) {
      ++best.singular;
      continue;
    }
    const Vector w = lu.solve(Vector::Ones(kk));
    double residual = 0.0;
    if (!residual_ok(sub, w, &residual)) {
      ++best.singular;
      continue;
    }
    if (w.minCoeff() <= kPositivityTolerance) continue;
    const double value = w.sum();
    if (best.mask == 0 || better(value, mask, best.value, best.mask)) {
      best.value = value;
      best.mask = mask;
    }
  }
  return best;
}

}  // namespace

DiversityResult max_diversity_exact(const FiniteMetricSpace& space, double t,
                                    const EnumerationOptions& options) {
  const std::size_t n = space.size();
  if (n == 0) throw Error(ErrorCode::EmptySet, "maximum diversity of an empty space");
  if (n > options.max_points || n > 62) {
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " points exceeds the enumeration cap " +
                                         std::to_string(options.max_points),
                {n, options.max_points});
  }
  const SimilarityMatrix z = laplace_kernel(space, t);
  const std::uint64_t total = std::uint64_t{1} << n;

  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.workers, 1, total - 1));
  std::vector<Candidate> partial(workers);
  if (workers == 1) {
    partial[0] = scan_subsets(z.z, 1, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total - 1 + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = 1 + w * chunk;
      const std::uint64_t last = std::min(total, first + chunk);
      pool.emplace_back([&, w, first, last] {
        if (first < last) partial[w] = scan_subsets(z.z, first, last);
      });
    }
    for (auto& th : pool) th.join();
  }

  Candidate best;
  std::size_t singular = 0;
  for (const auto& c : partial) {
    singular += c.singular;
    if (c.mask != 0 && (best.mask == 0 || better(c.value, c.mask, best.value, best.mask))) {
      best.value = c.value;
      best.mask = c.mask;
    }
  }
  if (best.mask == 0) {
    throw Error(ErrorCode::NoPositiveSubset, "no subset has a positive weighting");
  }
  DiversityResult out = diversity_from_support(z, indices_of(best.mask));
  out.singular_subsets = singular;
  return out;
}

std::vector<double> linear_grid(double t_min, double t_max, std::size_t steps) {
  if (steps == 0 || !(t_min > 0.0) || !std::isfinite(t_max) || t_max < t_min ||
      (steps > 1 && !(t_max > t_min))) {
    throw Error(ErrorCode::InvalidGrid, "need 0 < t_min < t_max and steps >= 1");
  }
  if (steps == 1) return {t_min};
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  grid.back() = t_max;
  return grid;
}

ComplexityProfile complexity_profile(const FiniteMetricSpace& space,
                                     const std::vector<double>& t_grid,
                                     const EnumerationOptions& options) {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidGrid, "empty scale grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidGrid, "scales must be positive and strictly increasing", {i});
    }
  }
  ComplexityProfile profile;
  profile.entries.reserve(t_grid.size());
  for (double t : t_grid) {
    const DiversityResult r = max_diversity_exact(space, t, options);
    profile.entries.push_back({t, r.diversity, r.complexity, r.kappa});
  }
  return profile;
}

}  // namespace metricdiv
