#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "metricdiv/constructions.hpp"
#include "metricdiv/harness.hpp"
#include "support.hpp"

using namespace metricdiv;
using doctest::Approx;

namespace {

PointedFiniteMetricSpace pointed(const std::vector<double>& xs, std::size_t base) {
  return PointedFiniteMetricSpace(testing::line(xs), base);
}

RealFiniteSet rs(std::vector<double> xs) { return RealFiniteSet(std::move(xs)); }

std::vector<double> sorted_distances(const FiniteMetricSpace& s) {
  std::vector<double> d(s.distances().data(), s.distances().data() + s.distances().size());
  std::sort(d.begin(), d.end());
  return d;
}

PointedFiniteMetricSpace random_pointed(Rng& rng) {
  RandomModel model;
  model.kind = static_cast<SpaceModel>(rng.index(3));
  auto s = generate_space(model, rng.between(1, 4), rng);
  const std::size_t base = rng.index(s.size());
  return PointedFiniteMetricSpace(std::move(s), base);
}

}  // namespace

TEST_SUITE("wedge_sum") {
  TEST_CASE("two segments glued at their left ends") {
    const auto w = wedge_sum(pointed({0, 1}, 0), pointed({0, 2}, 0));
    CHECK(w.space.size() == 3);
    CHECK(w.basepoint == 0);
    CHECK(w.space.labels() == std::vector<std::string>{"∗", "A:1", "B:1"});
    CHECK(w.space.distance(1, 2) == 3.0);
    CHECK(w.space.distance(0, 2) == 2.0);
  }

  TEST_CASE("a singleton is a unit for the wedge") {
    const auto a = pointed({0, 1, 3}, 1);
    const auto w = wedge_sum(a, pointed({7}, 0));
    CHECK(sorted_distances(w.space) == sorted_distances(a.space));
    const auto w2 = wedge_sum(pointed({7}, 0), a);
    CHECK(sorted_distances(w2.space) == sorted_distances(a.space));
  }

  TEST_CASE("associativity up to relabeling") {
    Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_pointed(rng);
      const auto b = random_pointed(rng);
      const auto c = random_pointed(rng);
      const auto left = wedge_sum(wedge_sum(a, b), c);
      const auto right = wedge_sum(a, wedge_sum(b, c));
      REQUIRE(left.space.size() == right.space.size());
      CHECK(left.space.size() == a.space.size() + b.space.size() + c.space.size() - 2);
      // Both orders list the glued point, then A, B, C's other points.
      CHECK((left.space.distances() - right.space.distances()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK_NOTHROW(validate_metric(left.space.distances()));
    }
  }

  TEST_CASE("identity map to the union inside an ambient space is 1-Lipschitz") {
    Rng rng(53);
    RandomModel model;
    model.kind = SpaceModel::ShortestPath;
    for (int trial = 0; trial < 100; ++trial) {
      const auto ambient = generate_space(model, rng.between(2, 7), rng);
      const std::size_t n = ambient.size();
      const std::size_t x0 = rng.index(n);
      IndexSet a{x0}, b{x0};
      for (std::size_t i = 0; i < n; ++i) {
        if (i == x0) continue;
        (rng.coin() ? a : b).push_back(i);
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      const auto pa = PointedFiniteMetricSpace(ambient.subspace(a),
                                               std::find(a.begin(), a.end(), x0) - a.begin());
      const auto pb = PointedFiniteMetricSpace(ambient.subspace(b),
                                               std::find(b.begin(), b.end(), x0) - b.begin());
      const auto w = wedge_sum(pa, pb);
      // Wedge order: x0, A \ {x0}, B \ {x0}.
      IndexSet order{x0};
      for (auto i : a) if (i != x0) order.push_back(i);
      for (auto i : b) if (i != x0) order.push_back(i);
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < order.size(); ++j) {
          CHECK(w.space.distance(i, j) >= ambient.distance(order[i], order[j]) - 1e-12);
        }
      }
    }
  }
}

TEST_SUITE("real set arithmetic") {
  TEST_CASE("minkowski sums") {
    CHECK(minkowski_sum(rs({0, 1}), rs({0, 2})).values() == std::vector<double>{0, 1, 2, 3});
    CHECK(minkowski_sum(rs({0.5, 3}), rs({0})).values() == std::vector<double>{0.5, 3});
    CHECK(minkowski_sum(rs({0, 1}), rs({0, 1})).values() == std::vector<double>{0, 1, 2});
    CHECK(minkowski_sum(rs({0.1, 0.2}), rs({0, 0.1})).size() == 3);
  }

  TEST_CASE("affine combinations") {
    const auto a = rs({0, 2});
    const auto b = rs({0, 4});
    CHECK(affine_combination(a, b, 0.0).values() == a.values());
    CHECK(affine_combination(a, b, 1.0).values() == b.values());
    CHECK(affine_combination(a, b, 0.5).values() == std::vector<double>{0, 1, 2, 3});
    CHECK_THROWS_AS(affine_combination(a, b, 1.5), Error);
    CHECK_THROWS_AS(affine_combination(a, b, -0.1), Error);
    CHECK(scale(a, 0.0).values() == std::vector<double>{0});
  }

  TEST_CASE("sum cardinality is at least |A| + |B| - 1") {
    Rng rng(57);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> xa, xb;
      for (std::size_t i = rng.between(1, 6); i > 0; --i) xa.push_back(static_cast<double>(rng.index(12)));
      for (std::size_t i = rng.between(1, 6); i > 0; --i) xb.push_back(rng.coin() ? rng.uniform(0, 5) : static_cast<double>(rng.index(12)));
      const auto a = RealFiniteSet::from_unsorted(xa, 1e-9);
      const auto b = RealFiniteSet::from_unsorted(xb, 1e-9);
      CHECK(minkowski_sum(a, b).size() >= a.size() + b.size() - 1);
    }
  }

  TEST_CASE("sum diversity example") {
    const double kab = max_diversity_exact(minkowski_sum(rs({0, 1}), rs({0, 2})).to_metric_space(), 1.0).kappa;
    CHECK(kab == Approx(1.3863514717800292).epsilon(1e-12));
    const double ka = max_diversity_exact(rs({0, 1}).to_metric_space(), 1.0).kappa;
    const double kb = max_diversity_exact(rs({0, 2}).to_metric_space(), 1.0).kappa;
    CHECK(ka + kb == Approx(1.2237113132157746).epsilon(1e-12));
  }
}

TEST_SUITE("unions") {
  TEST_CASE("union_subspace") {
    const auto s = testing::line({0, 1, 3, 6});
    CHECK(union_subspace(s, {{0, 1, 2, 3}}).distances() == s.distances());
    CHECK(union_subspace(s, {{0}, {1}}).size() == 2);
    const auto u = union_subspace(s, {{0, 1}, {1, 2}});
    CHECK(u.size() == 3);
    CHECK(u.distance(0, 2) == 3.0);
    CHECK_THROWS_AS(union_subspace(s, {{4}}), Error);
  }

  TEST_CASE("disjointify examples") {
    CHECK(disjointify({{0, 1}, {1, 2}}) == std::vector<IndexSet>{{0, 1}, {2}});
    CHECK(disjointify({{0}, {3, 4}}) == std::vector<IndexSet>{{0}, {3, 4}});
    CHECK(disjointify({{0}, {0}, {0}}) == std::vector<IndexSet>{{0}, {}, {}});
  }

  TEST_CASE("disjointify is disjoint, union preserving and shrinking") {
    Rng rng(59);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<IndexSet> parts(rng.between(1, 5));
      for (auto& p : parts) {
        for (std::size_t i = 0; i < 8; ++i) {
          if (rng.coin(0.4)) p.push_back(i);
        }
      }
      const auto out = disjointify(parts);
      REQUIRE(out.size() == parts.size());
      std::set<std::size_t> seen;
      for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(std::includes(parts[i].begin(), parts[i].end(), out[i].begin(), out[i].end()));
        for (auto x : out[i]) CHECK(seen.insert(x).second);
      }
      const auto u = union_of(parts);
      CHECK(IndexSet(seen.begin(), seen.end()) == u);
    }
  }
}

TEST_SUITE("fractional partitions") {
  TEST_CASE("kinds") {
    const auto loo = fractional_partition(3, partition_kind::LeaveOneOut{});
    CHECK(loo.beta().size() == 3);
    for (const auto& ws : loo.beta()) {
      CHECK(ws.set.size() == 2);
      CHECK(ws.weight == Approx(0.5));
    }
    const auto single = fractional_partition(2, partition_kind::Singletons{});
    CHECK(single.beta().size() == 2);
    for (const auto& ws : single.beta()) CHECK(ws.weight == 1.0);
    const auto pairs = fractional_partition(4, partition_kind::UniformK{2});
    CHECK(pairs.beta().size() == 6);
    for (const auto& ws : pairs.beta()) CHECK(ws.weight == Approx(1.0 / 3.0));
  }

  TEST_CASE("covering identity holds for every generated kind") {
    for (std::size_t n = 1; n <= 7; ++n) {
      CHECK(fractional_partition(n, partition_kind::Singletons{}).covering_error() <= 1e-12);
      if (n >= 2) CHECK(fractional_partition(n, partition_kind::LeaveOneOut{}).covering_error() <= 1e-12);
      for (std::size_t k = 1; k <= n; ++k) {
        CHECK(fractional_partition(n, partition_kind::UniformK{k}).covering_error() <= 1e-12);
      }
    }
  }

  TEST_CASE("invalid partitions") {
    CHECK_THROWS_AS(fractional_partition(1, partition_kind::LeaveOneOut{}), Error);
    CHECK_THROWS_AS(fractional_partition(3, partition_kind::UniformK{4}), Error);
    CHECK_THROWS_AS(fractional_partition(3, partition_kind::UniformK{0}), Error);
    CHECK_THROWS_AS(fractional_partition(2, partition_kind::Explicit{{{{0}, 1.0}}}), Error);
    CHECK_THROWS_AS(fractional_partition(2, partition_kind::Explicit{{{{0, 1}, 0.5}}}), Error);
    CHECK_NOTHROW(fractional_partition(2, partition_kind::Explicit{{{{0, 1}, 0.5}, {{0}, 0.5}, {{1}, 0.5}}}));
  }
}

TEST_SUITE("mixtures") {
  Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
  }

  TEST_CASE("sub-mixtures") {
    const MixtureSpec spec({ProbabilityVector(vec({0.5, 0.5, 0, 0})), ProbabilityVector(vec({0, 0, 0.25, 0.75}))},
                           {0.5, 0.5});
    const auto full = mixture_complexity_inputs(spec, {0, 1});
    CHECK(full.values().isApprox(vec({0.25, 0.25, 0.125, 0.375})));
    CHECK(mixture_complexity_inputs(spec, {1}).values() == spec.components()[1].values());
  }

  TEST_CASE("validation") {
    const ProbabilityVector a(vec({1, 0})), b(vec({0, 1})), c(vec({0.5, 0.5}));
    CHECK_THROWS_AS(MixtureSpec({a, c}, {0.5, 0.5}), Error);  // overlapping supports
    CHECK_THROWS_AS(MixtureSpec({a, b}, {0.5, 0.6}), Error);
    CHECK_THROWS_AS(MixtureSpec({a, b}, {0.5}), Error);
    const MixtureSpec spec({a, b}, {1.0, 0.0});
    try {
      mixture_complexity_inputs(spec, {1});
      FAIL("accepted a weightless subset");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroMassSubset);
    }
  }
}
