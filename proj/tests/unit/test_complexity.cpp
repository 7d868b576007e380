#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "metricdiv/complexity.hpp"
#include "metricdiv/random.hpp"
#include "support.hpp"

using namespace metricdiv;
using doctest::Approx;

namespace {

const double kLn3 = std::log(3.0);

ProbabilityVector pv(std::vector<double> v) {
  return ProbabilityVector(Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
}

FiniteMetricSpace random_space(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> pts;
  for (;;) {
    pts.clear();
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 3), rng.uniform(0, 3)});
    try {
      auto s = metric_from_points(pts, static_cast<Norm>(rng.index(3)));
      if (s.min_distance() > 1e-3) return s;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_SUITE("renyi_entropy") {
  TEST_CASE("uniform distribution has entropy log n at every order") {
    for (double a : {0.0, 0.5, 1.0, 2.0, 7.0, kInfinity}) {
      CHECK(renyi_entropy(ProbabilityVector::uniform(4), a) == Approx(std::log(4.0)).epsilon(1e-14));
    }
  }

  TEST_CASE("point mass has zero entropy") {
    for (double a : {0.0, 0.5, 1.0, 2.0, kInfinity}) {
      CHECK(renyi_entropy(ProbabilityVector::point_mass(3, 2), a) == Approx(0.0).epsilon(1e-15));
    }
  }

  TEST_CASE("(3/4, 1/4) at order 2 is log 1.6, and nearby orders converge to it") {
    const auto p = pv({0.75, 0.25});
    CHECK(renyi_entropy(p, 2.0) == Approx(std::log(1.6)).epsilon(1e-14));
    CHECK(std::abs(renyi_entropy(p, 2.0 + 1e-6) - std::log(1.6)) < 1e-6);
    CHECK(std::abs(renyi_entropy(p, 2.0 - 1e-6) - std::log(1.6)) < 1e-6);
  }

  TEST_CASE("orders 1 and infinity agree with their limits") {
    const auto p = pv({0.5, 0.3, 0.2});
    const double shannon = -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
    CHECK(renyi_entropy(p, 1.0) == Approx(shannon).epsilon(1e-14));
    CHECK(std::abs(renyi_entropy(p, 1.0 + 1e-7) - shannon) < 1e-6);
    CHECK(renyi_entropy(p, kInfinity) == Approx(-std::log(0.5)).epsilon(1e-14));
    CHECK(std::abs(renyi_entropy(p, 2000.0) - renyi_entropy(p, kInfinity)) < 1e-3);
  }

  TEST_CASE("order must be nonnegative") {
    CHECK_THROWS_AS(renyi_entropy(ProbabilityVector::uniform(2), -0.5), Error);
  }
}

TEST_SUITE("alpha_complexity") {
  TEST_CASE("kronecker kernel reduces to Renyi entropy") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = rng.between(1, 8);
      Vector v = rng.dirichlet(n);
      if (rng.coin(0.3)) v(static_cast<Eigen::Index>(rng.index(n))) = 0.0;
      if (!(v.sum() > 0.0)) continue;
      const ProbabilityVector p(v / v.sum());
      for (double a : {0.0, 0.5, 1.0, 2.0, 5.0, kInfinity}) {
        CHECK(std::abs(alpha_complexity(p, kronecker_kernel(n), a) - renyi_entropy(p, a)) <= 1e-12);
      }
    }
  }

  TEST_CASE("two points at ln 3, uniform p: every order gives log 3/2") {
    const auto z = laplace_kernel(testing::line({0, kLn3}), 1.0);
    for (double a : {0.0, 0.5, 1.0, 2.0, kInfinity}) {
      CHECK(alpha_complexity(ProbabilityVector::uniform(2), z, a) ==
            Approx(std::log(1.5)).epsilon(1e-14));
    }
  }

  TEST_CASE("point mass has zero complexity") {
    const auto z = laplace_kernel(testing::line({0, 1, 4}), 1.0);
    for (double a : {0.0, 1.0, 2.0, kInfinity}) {
      CHECK(alpha_complexity(ProbabilityVector::point_mass(3, 1), z, a) == Approx(0.0));
    }
  }

  TEST_CASE("matches the direct formula on random inputs") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_space(rng, rng.between(1, 6));
      const double t = rng.uniform(0.2, 3.0);
      const Vector v = rng.dirichlet(s.size());
      const ProbabilityVector p(v);
      const auto rows = testing::kernel_rows(s, t);
      const std::vector<double> pvec(v.data(), v.data() + v.size());
      for (double a : {0.0, 0.5, 1.0, 2.0, 3.5, kInfinity}) {
        const double got = std::exp(alpha_complexity(p, laplace_kernel(s, t), a));
        CHECK(got == Approx(testing::ref_alpha_diversity(rows, pvec, a)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("large finite order approaches the infinite order") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_space(rng, rng.between(1, 6));
      const double t = rng.uniform(0.2, 3.0);
      const auto z = laplace_kernel(s, t);
      const auto best = max_diversity_exact(s, t).maximizer;
      CHECK(std::abs(std::exp(alpha_complexity(best, z, 64.0)) -
                     std::exp(alpha_complexity(best, z, kInfinity))) <= 1e-3);
      // Arbitrary p: D_inf <= D_64 <= D_inf * max(p)^(-1/63).
      const ProbabilityVector p(rng.dirichlet(s.size()));
      const double d64 = std::exp(alpha_complexity(p, z, 64.0));
      const double dinf = std::exp(alpha_complexity(p, z, kInfinity));
      CHECK(dinf <= d64 * (1 + 1e-12));
      CHECK(d64 <= dinf * std::pow(p.values().minCoeff(), -1.0 / 63.0) * (1 + 1e-12));
    }
  }

  TEST_CASE("errors") {
    const auto z = laplace_kernel(testing::line({0, 1}), 1.0);
    CHECK_THROWS_AS(alpha_complexity(ProbabilityVector::uniform(3), z, 1.0), Error);
    CHECK_THROWS_AS(alpha_complexity(ProbabilityVector::uniform(2), z, -1.0), Error);
  }
}

TEST_SUITE("weighting and magnitude") {
  TEST_CASE("singleton") {
    const auto w = weighting(laplace_kernel(testing::line({5}), 1.0));
    CHECK(w.w.size() == 1);
    CHECK(w.w(0) == 1.0);
    CHECK(magnitude(testing::line({5}), 2.0) == 1.0);
  }

  TEST_CASE("two points at ln 3: w = (3/4, 3/4), magnitude 3/2") {
    const auto w = weighting(laplace_kernel(testing::line({0, kLn3}), 1.0));
    CHECK(w.w(0) == Approx(0.75).epsilon(1e-14));
    CHECK(w.w(1) == Approx(0.75).epsilon(1e-14));
    CHECK(w.residual < 1e-14);
    CHECK(magnitude(testing::line({0, kLn3}), 1.0) == Approx(1.5).epsilon(1e-14));
  }

  TEST_CASE("{0, 1, 2} at t = 1") {
    const auto s = testing::line({0, 1, 2});
    const auto w = weighting(laplace_kernel(s, 1.0));
    CHECK(w.w(0) == Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(w.w(1) == Approx(0.4621171572600098).epsilon(1e-12));
    CHECK(w.w(2) == Approx(0.7310585786300049).epsilon(1e-12));
    // 1.924200 is 1 + 2 tanh(1/2) rounded.
    CHECK(magnitude(s, 1.0) == Approx(1.9242343145200196).epsilon(1e-13));
    CHECK(std::abs(magnitude(s, 1.0) - 1.924200) < 1e-4);
  }

  TEST_CASE("agrees with an independent elimination solve") {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_space(rng, rng.between(1, 7));
      const double t = rng.uniform(0.1, 4.0);
      CHECK(magnitude(s, t) == Approx(testing::ref_magnitude(s, t)).epsilon(1e-9));
    }
  }

  TEST_CASE("singular kernels are reported") {
    Matrix ones = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(weighting(SimilarityMatrix{ones, 1.0}), Error);
  }
}

TEST_SUITE("max_diversity_exact") {
  TEST_CASE("singleton") {
    const auto r = max_diversity_exact(testing::line({1}), 1.0);
    CHECK(r.diversity == 1.0);
    CHECK(r.complexity == 0.0);
    CHECK(r.kappa == 0.0);
    CHECK(r.maximizer[0] == 1.0);
  }

  TEST_CASE("two points at ln 3") {
    const auto r = max_diversity_exact(testing::line({0, kLn3}), 1.0);
    CHECK(r.diversity == Approx(1.5).epsilon(1e-14));
    CHECK(r.complexity == Approx(std::log(1.5)).epsilon(1e-14));
    CHECK(r.maximizer[0] == Approx(0.5));
    CHECK(r.maximizer[1] == Approx(0.5));
    CHECK(r.support == IndexSet{0, 1});
    CHECK(std::abs(r.certificate_gap) < 1e-12);
  }

  TEST_CASE("{0, 1, 2} at t = 1 and t = 50") {
    const auto s = testing::line({0, 1, 2});
    CHECK(max_diversity_exact(s, 1.0).diversity == Approx(1 + 2 * std::tanh(0.5)).epsilon(1e-13));
    CHECK(std::abs(max_diversity_exact(s, 50.0).diversity - 3.0) < 1e-3);
  }

  TEST_CASE("derived fields and certificate on random spaces") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
      const auto s = random_space(rng, rng.between(1, 8));
      const double t = rng.uniform(0.1, 5.0);
      const auto r = max_diversity_exact(s, t);
      CHECK(r.complexity == std::log(r.diversity));
      CHECK(r.kappa == r.diversity - 1.0);
      CHECK(r.diversity >= 1.0);
      CHECK(r.diversity <= static_cast<double>(s.size()) + 1e-9);
      CHECK(certificate_holds(r));
      CHECK(r.support_residual <= 1e-8);
      CHECK(r.certificate_gap >= -1e-8);
      CHECK(r.diversity == Approx(testing::ref_max_diversity(s, t)).epsilon(1e-9));
    }
  }

  TEST_CASE("brute-force simplex grid agrees for small spaces") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = random_space(rng, rng.between(1, 3));
      const double t = rng.uniform(0.3, 2.0);
      const double exact = max_diversity_exact(s, t).diversity;
      for (double a : {0.5, 1.0, 2.0, kInfinity}) {
        const double grid = testing::ref_grid_diversity(s, t, a, 300);
        CHECK(grid <= exact + 1e-9);
        CHECK(grid >= exact - 1e-6);
      }
    }
  }

  TEST_CASE("monotone under inclusion and under contraction") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_space(rng, rng.between(2, 7));
      const double t = rng.uniform(0.2, 3.0);
      IndexSet sub;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (rng.coin()) sub.push_back(i);
      }
      if (sub.empty()) sub.push_back(0);
      const double full = max_diversity_exact(s, t).diversity;
      CHECK(max_diversity_exact(s.subspace(sub), t).diversity <= full + 1e-9);
      CHECK(max_diversity_exact(s.scaled(rng.uniform(0.05, 1.0)), t).diversity <= full + 1e-9);
    }
  }

  TEST_CASE("worker count does not change the result") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = random_space(rng, rng.between(4, 10));
      const auto a = max_diversity_exact(s, 1.0, {22, 1});
      const auto b = max_diversity_exact(s, 1.0, {22, 4});
      CHECK(a.diversity == b.diversity);
      CHECK(a.support == b.support);
      CHECK(a.maximizer.values() == b.maximizer.values());
    }
  }

  TEST_CASE("support is sorted and carries the maximizer") {
    Rng rng(27);
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = random_space(rng, rng.between(2, 8));
      const auto r = max_diversity_exact(s, rng.uniform(0.2, 3.0));
      CHECK(std::is_sorted(r.support.begin(), r.support.end()));
      CHECK(r.maximizer.support() == r.support);
    }
  }

  TEST_CASE("size cap and empty input") {
    Rng rng(1);
    const auto s = random_space(rng, 6);
    try {
      max_diversity_exact(s, 1.0, {5, 1});
      FAIL("cap ignored");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooLarge);
    }
    CHECK_THROWS_AS(max_diversity_exact(FiniteMetricSpace{}, 1.0), Error);
  }
}

TEST_SUITE("complexity_profile") {
  TEST_CASE("singleton stays at 1") {
    const auto p = complexity_profile(testing::line({0}), linear_grid(0.1, 10, 7));
    for (const auto& e : p.entries) CHECK(e.diversity == 1.0);
  }

  TEST_CASE("two points at distance 1 follow 2 / (1 + exp(-t))") {
    const auto p = complexity_profile(testing::line({0, 1}), {kLn3, 1.0 + kLn3, 5.0});
    CHECK(p.entries[0].diversity == Approx(1.5).epsilon(1e-14));
    for (const auto& e : p.entries) CHECK(e.diversity == Approx(2 / (1 + std::exp(-e.t))).epsilon(1e-13));
  }

  TEST_CASE("nondecreasing in t and bounded by n") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      const auto s = random_space(rng, rng.between(1, 7));
      const auto p = complexity_profile(s, linear_grid(0.05, 20.0, 25));
      for (std::size_t i = 0; i < p.entries.size(); ++i) {
        CHECK(p.entries[i].diversity >= 1.0);
        CHECK(p.entries[i].diversity <= static_cast<double>(s.size()) + 1e-9);
        if (i > 0) {
          CHECK(p.entries[i].t > p.entries[i - 1].t);
          CHECK(p.entries[i].diversity >= p.entries[i - 1].diversity - 1e-12);
        }
      }
    }
  }

  TEST_CASE("grid validation") {
    CHECK_THROWS_AS(complexity_profile(testing::line({0}), {}), Error);
    CHECK_THROWS_AS(complexity_profile(testing::line({0}), {1.0, 1.0}), Error);
    CHECK_THROWS_AS(complexity_profile(testing::line({0}), {-1.0, 1.0}), Error);
    CHECK_THROWS_AS(linear_grid(2.0, 1.0, 3), Error);
  }
}

TEST_SUITE("real line") {
  TEST_CASE("closed form examples") {
    CHECK(real_set_diversity(RealCompactSet({{0, 0}}), 1.0) == 1.0);
    CHECK(real_set_diversity(RealCompactSet({{0, 0}, {kLn3, kLn3}}), 1.0) ==
          Approx(1.5).epsilon(1e-14));
    CHECK(real_set_diversity(RealCompactSet({{0, 1}, {2, 3}}), 1.0) ==
          Approx(2.4621171572600096).epsilon(1e-14));
    CHECK(real_set_diversity(RealCompactSet({{0, 1}}), 1.0) == 1.5);
    CHECK_THROWS_AS(real_set_diversity(RealCompactSet{}, 1.0), Error);
  }

  TEST_CASE("closed form matches enumeration on finite sets") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> xs;
      const std::size_t n = rng.between(1, 8);
      for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.uniform(0, 6));
      const auto set = RealFiniteSet::from_unsorted(xs, 1e-3);
      std::vector<Interval> pts;
      for (double x : set.values()) pts.push_back({x, x});
      const double t = rng.uniform(0.2, 4.0);
      const double closed = real_set_diversity(RealCompactSet(pts), t);
      CHECK(closed == Approx(max_diversity_exact(set.to_metric_space(), t).diversity).epsilon(1e-9));
      CHECK(closed == Approx(testing::ref_line_diversity(set.values(), t)).epsilon(1e-13));
    }
  }

  TEST_CASE("epsilon nets") {
    const RealCompactSet pair({{0, 0}, {1, 1}});
    for (double h : {0.5, 0.01}) {
      CHECK(epsilon_net(pair, h).values() == std::vector<double>{0.0, 1.0});
      CHECK(epsilon_net_diversity(pair, 2.0, h) == Approx(1 + std::tanh(1.0)).epsilon(1e-13));
    }
    const auto net = epsilon_net(RealCompactSet({{0, 1}}), 0.25);
    CHECK(net.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(epsilon_net(RealCompactSet({{0, 1}}), 0.0), Error);
  }

  TEST_CASE("net of [0, 1] approaches 1.5 and grows as spacing halves") {
    const RealCompactSet e({{0, 1}});
    const double coarse = epsilon_net_diversity(e, 1.0, 1e-2);
    const double fine = epsilon_net_diversity(e, 1.0, 1e-3);
    CHECK(fine >= coarse);
    CHECK(std::abs(fine - 1.5) <= 1e-2);
  }
}
