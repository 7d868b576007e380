#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "harness_detail.hpp"
#include "metricdiv/constructions.hpp"
#include "metricdiv/harness.hpp"

namespace metricdiv {

using detail::all_but;
using detail::Assertion;
using detail::at_most;
using detail::CheckSpec;
using detail::drop_bit;
using detail::equal;
using detail::Mask;
using detail::mask_indices;
using detail::popcount;
using detail::run_check;

namespace {

const RandomModel& model_for(const CheckConfig& config, std::size_t trial) {
  if (config.models.empty()) {
    throw Error(ErrorCode::InvalidGrid, "check configured without random models");
  }
  return config.models[trial % config.models.size()];
}

Json with_space(const FiniteMetricSpace& space, double t) {
  Json j = space_to_json(space);
  j["t"] = t;
  return j;
}

Json pointed_json(const PointedFiniteMetricSpace& p) { return pointed_space_to_json(p); }

std::string alpha_name(double alpha) {
  if (std::isinf(alpha)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", alpha);
  return buf;
}

// Removing ambient point k from a space together with the subsets drawn in it.
FiniteMetricSpace without_point(const FiniteMetricSpace& s, std::size_t k) {
  return s.subspace(all_but(s.size(), k));
}

// ---------------------------------------------------------------------------
// Diversity axioms

struct AxiomInstance {
  FiniteMetricSpace ambient;
  double t;
  Mask a, b, c;
};

Assertion nondegenerate(const std::string& name, std::size_t count, double value) {
  if (count <= 1) return {name, value, 0.0, -std::abs(value)};
  // Must be strictly positive; a zero value counts as a full unit short.
  return {name, 0.0, value, value > 0.0 ? value : value - 1.0};
}

}  // namespace

CheckReport check_diversity_axioms(const CheckConfig& config) {
  CheckSpec<AxiomInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace ambient = generate_space(model, rng);
    const double t = draw_scale(model, rng);
    const std::size_t n = ambient.size();
    const Mask a = detail::random_mask(n, rng);
    const Mask b = detail::random_mask(n, rng);
    const Mask c = detail::random_nonempty_mask(n, rng);
    return AxiomInstance{std::move(ambient), t, a, b, c};
  };
  spec.evaluate = [&](const AxiomInstance& in, CheckReport& report) {
    detail::SubsetEvaluator kappa(in.ambient, in.t, config.enumeration, report);
    std::map<Mask, double> memo;
    auto delta = [&](Mask m) {
      if (!config.delta) return kappa.kappa(m);
      if (auto it = memo.find(m); it != memo.end()) return it->second;
      const double v = config.delta->eval(in.ambient.subspace(mask_indices(m)), in.t);
      memo.emplace(m, v);
      return v;
    };
    std::vector<Assertion> out;
    const double ab = delta(in.a | in.b);
    const double ac = delta(in.a | in.c);
    const double bc = delta(in.b | in.c);
    out.push_back(at_most("triangle", ab, ac + bc));
    out.push_back(at_most("log_triangle", std::log1p(ab), std::log1p(ac) + std::log1p(bc)));

    const Mask first_of_c = in.c & (~in.c + 1);
    const std::pair<const char*, Mask> sets[] = {
        {"empty", 0},      {"A", in.a},         {"B", in.b},           {"C", in.c},
        {"A|B", in.a | in.b}, {"A|C", in.a | in.c}, {"B|C", in.b | in.c}, {"point", first_of_c}};
    for (const auto& [label, m] : sets) {
      out.push_back(nondegenerate(std::string("nondegenerate:") + label, popcount(m), delta(m)));
    }
    return out;
  };
  spec.shrink_candidates = [](const AxiomInstance& in) {
    std::vector<AxiomInstance> out;
    for (std::size_t k = 0; k < in.ambient.size(); ++k) {
      const Mask c = drop_bit(in.c, k);
      if (c == 0) continue;
      out.push_back({without_point(in.ambient, k), in.t, drop_bit(in.a, k), drop_bit(in.b, k), c});
    }
    return out;
  };
  spec.to_json = [](const AxiomInstance& in) {
    Json j = with_space(in.ambient, in.t);
    j["A"] = mask_indices(in.a);
    j["B"] = mask_indices(in.b);
    j["C"] = mask_indices(in.c);
    return j;
  };
  return run_check("diversity_axioms", config, spec);
}

// ---------------------------------------------------------------------------
// One-point reduction

namespace {

struct OnePointInstance {
  FiniteMetricSpace ambient;
  double t;
  std::size_t x0;
  Mask a, b, c;  // a & b == {x0}
};

}  // namespace

CheckReport check_one_point_reduction(const CheckConfig& config) {
  CheckSpec<OnePointInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace ambient = generate_space(model, rng);
    const double t = draw_scale(model, rng);
    const std::size_t n = ambient.size();
    const std::size_t x0 = rng.index(n);
    Mask a = Mask{1} << x0;
    Mask b = a;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == x0) continue;
      const std::size_t side = rng.index(3);
      if (side == 0) a |= Mask{1} << i;
      if (side == 1) b |= Mask{1} << i;
    }
    const Mask c = detail::random_nonempty_mask(n, rng);
    return OnePointInstance{std::move(ambient), t, x0, a, b, c};
  };
  spec.evaluate = [&](const OnePointInstance& in, CheckReport& report) {
    detail::SubsetEvaluator ev(in.ambient, in.t, config.enumeration, report);
    const Mask base = Mask{1} << in.x0;
    std::vector<Assertion> out;
    out.push_back(at_most("one_point_subadditivity", ev.kappa(in.a | in.b),
                          ev.kappa(in.a) + ev.kappa(in.b)));
    out.push_back(at_most("monotone:A", ev.kappa(in.a), ev.kappa(in.a | in.b)));
    out.push_back(at_most("monotone:B", ev.kappa(in.b), ev.kappa(in.a | in.b)));
    out.push_back(at_most("triangle", ev.kappa(in.a | in.b),
                          ev.kappa(in.a | in.c) + ev.kappa(in.b | in.c)));
    // Disjoint pieces glued through any nonempty C.
    const Mask a0 = in.a & ~base;
    const Mask b0 = in.b & ~base;
    out.push_back(at_most("triangle_disjoint", ev.kappa(a0 | b0),
                          ev.kappa(a0 | in.c) + ev.kappa(b0 | in.c)));
    return out;
  };
  spec.shrink_candidates = [](const OnePointInstance& in) {
    std::vector<OnePointInstance> out;
    for (std::size_t k = 0; k < in.ambient.size(); ++k) {
      if (k == in.x0) continue;
      const Mask c = drop_bit(in.c, k);
      if (c == 0) continue;
      out.push_back({without_point(in.ambient, k), in.t, k < in.x0 ? in.x0 - 1 : in.x0,
                     drop_bit(in.a, k), drop_bit(in.b, k), c});
    }
    return out;
  };
  spec.to_json = [](const OnePointInstance& in) {
    Json j = with_space(in.ambient, in.t);
    j["x0"] = in.x0;
    j["A"] = mask_indices(in.a);
    j["B"] = mask_indices(in.b);
    j["C"] = mask_indices(in.c);
    return j;
  };
  return run_check("one_point_reduction", config, spec);
}

// ---------------------------------------------------------------------------
// Wedge sums

namespace {

struct WedgeInstance {
  PointedFiniteMetricSpace a;
  PointedFiniteMetricSpace b;
  double t;
};

PointedFiniteMetricSpace random_pointed(const RandomModel& model, Rng& rng) {
  FiniteMetricSpace s = generate_space(model, rng);
  const std::size_t base = rng.index(s.size());
  return PointedFiniteMetricSpace(std::move(s), base);
}

std::vector<PointedFiniteMetricSpace> pointed_shrinks(const PointedFiniteMetricSpace& p) {
  std::vector<PointedFiniteMetricSpace> out;
  for (std::size_t k = 0; k < p.space.size(); ++k) {
    if (k == p.basepoint) continue;
    out.emplace_back(without_point(p.space, k), k < p.basepoint ? p.basepoint - 1 : p.basepoint);
  }
  return out;
}

std::optional<double> try_magnitude(const FiniteMetricSpace& s, double t) {
  try {
    return magnitude(s, t);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CheckReport check_wedge_subadditivity(const CheckConfig& config) {
  CheckSpec<WedgeInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    PointedFiniteMetricSpace a = random_pointed(model, rng);
    PointedFiniteMetricSpace b = random_pointed(model, rng);
    return WedgeInstance{std::move(a), std::move(b), draw_scale(model, rng)};
  };
  spec.evaluate = [&](const WedgeInstance& in, CheckReport& report) {
    const auto wedge = wedge_sum(in.a, in.b);
    const auto& opts = config.enumeration;
    const double dw = detail::audited_diversity(wedge.space, in.t, opts, report);
    const double da = detail::audited_diversity(in.a.space, in.t, opts, report);
    const double db = detail::audited_diversity(in.b.space, in.t, opts, report);
    std::vector<Assertion> out;
    out.push_back(at_most("wedge_subadditivity", dw + 1.0, da + db));
    const auto mw = try_magnitude(wedge.space, in.t);
    const auto ma = try_magnitude(in.a.space, in.t);
    const auto mb = try_magnitude(in.b.space, in.t);
    if (mw && ma && mb) out.push_back(equal("magnitude_wedge_identity", *mw, *ma + *mb - 1.0));
    return out;
  };
  spec.shrink_candidates = [](const WedgeInstance& in) {
    std::vector<WedgeInstance> out;
    for (auto& a : pointed_shrinks(in.a)) out.push_back({std::move(a), in.b, in.t});
    for (auto& b : pointed_shrinks(in.b)) out.push_back({in.a, std::move(b), in.t});
    return out;
  };
  spec.to_json = [](const WedgeInstance& in) {
    return Json{{"A", pointed_json(in.a)}, {"B", pointed_json(in.b)}, {"t", in.t}};
  };
  return run_check("wedge_subadditivity", config, spec);
}

// ---------------------------------------------------------------------------
// Minkowski sums on the line

namespace {

struct MinkowskiInstance {
  RealFiniteSet a;
  RealFiniteSet b;
  double t;
};

RealFiniteSet random_real_set(std::size_t max_size, Rng& rng) {
  const std::size_t n = rng.between(1, std::max<std::size_t>(1, max_size));
  for (;;) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.uniform(0.0, 4.0);
    std::sort(xs.begin(), xs.end());
    bool separated = true;
    for (std::size_t i = 1; i < n; ++i) separated = separated && xs[i] - xs[i - 1] >= 1e-2;
    if (separated) return RealFiniteSet(std::move(xs));
  }
}

std::vector<RealFiniteSet> set_shrinks(const RealFiniteSet& s) {
  std::vector<RealFiniteSet> out;
  if (s.size() <= 1) return out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::vector<double> xs = s.values();
    xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(k));
    out.emplace_back(std::move(xs));
  }
  return out;
}

constexpr std::size_t kConcavityGrid = 11;

}  // namespace

CheckReport check_minkowski_superlinearity(const CheckConfig& config) {
  CheckSpec<MinkowskiInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    RealFiniteSet a = random_real_set(config.max_set_size, rng);
    RealFiniteSet b = random_real_set(config.max_set_size, rng);
    return MinkowskiInstance{std::move(a), std::move(b), draw_scale(model, rng)};
  };
  spec.evaluate = [&](const MinkowskiInstance& in, CheckReport& report) {
    auto d = [&](const RealFiniteSet& s) {
      return detail::audited_diversity(s.to_metric_space(), in.t, config.enumeration, report);
    };
    const double ka = d(in.a) - 1.0;
    const double kb = d(in.b) - 1.0;
    std::vector<Assertion> out;
    out.push_back(at_most("sum", ka + kb, d(minkowski_sum(in.a, in.b)) - 1.0));
    for (double lambda : config.lambdas) {
      const double k = d(affine_combination(in.a, in.b, lambda)) - 1.0;
      out.push_back(at_most("affine:" + alpha_name(lambda), (1.0 - lambda) * ka + lambda * kb, k));
    }
    // lambda -> D(lambda E) - (lambda D(E) + 1 - lambda) has nonpositive
    // second differences.
    for (const auto* e : {&in.a, &in.b}) {
      const double de = d(*e);
      std::vector<double> g(kConcavityGrid);
      for (std::size_t i = 0; i < kConcavityGrid; ++i) {
        const double lambda = static_cast<double>(i) / static_cast<double>(kConcavityGrid - 1);
        g[i] = d(scale(*e, lambda)) - (lambda * de + 1.0 - lambda);
      }
      const std::string which = e == &in.a ? "A" : "B";
      for (std::size_t i = 1; i + 1 < kConcavityGrid; ++i) {
        const double second = g[i - 1] - 2.0 * g[i] + g[i + 1];
        out.push_back(at_most("concavity:" + which + ":" + std::to_string(i), second, 0.0));
      }
    }
    return out;
  };
  spec.shrink_candidates = [](const MinkowskiInstance& in) {
    std::vector<MinkowskiInstance> out;
    for (auto& a : set_shrinks(in.a)) out.push_back({std::move(a), in.b, in.t});
    for (auto& b : set_shrinks(in.b)) out.push_back({in.a, std::move(b), in.t});
    return out;
  };
  spec.to_json = [](const MinkowskiInstance& in) {
    return Json{{"A", in.a.values()}, {"B", in.b.values()}, {"t", in.t}};
  };
  return run_check("minkowski_superlinearity", config, spec);
}

// ---------------------------------------------------------------------------
// Fractional subadditivity

namespace {

struct NamedPartition {
  std::string name;
  FractionalPartition beta;
};

std::vector<NamedPartition> partitions_for(std::size_t m) {
  std::vector<NamedPartition> out;
  out.push_back({"singletons", fractional_partition(m, partition_kind::Singletons{})});
  if (m >= 2) out.push_back({"leave_one_out", fractional_partition(m, partition_kind::LeaveOneOut{})});
  for (std::size_t k = 1; k <= m; ++k) {
    out.push_back({"uniform_k=" + std::to_string(k),
                   fractional_partition(m, partition_kind::UniformK{k})});
  }
  return out;
}

struct CoverInstance {
  FiniteMetricSpace ambient;
  double t;
  std::vector<Mask> parts;
};

Mask union_mask(const std::vector<Mask>& parts, const IndexSet& s) {
  Mask m = 0;
  for (auto i : s) m |= parts[i];
  return m;
}

std::vector<Mask> disjointified(const std::vector<Mask>& parts) {
  std::vector<IndexSet> sets;
  for (auto m : parts) sets.push_back(mask_indices(m));
  std::vector<Mask> out;
  for (const auto& s : disjointify(sets)) out.push_back(detail::indices_mask(s));
  return out;
}

}  // namespace

CheckReport check_fractional_subadditivity(const CheckConfig& config) {
  CheckSpec<CoverInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace ambient = generate_space(model, rng);
    const double t = draw_scale(model, rng);
    const std::size_t m = rng.between(2, 4);
    std::vector<Mask> parts;
    for (std::size_t i = 0; i < m; ++i) {
      parts.push_back(detail::random_nonempty_mask(ambient.size(), rng));
    }
    return CoverInstance{std::move(ambient), t, std::move(parts)};
  };
  spec.evaluate = [&](const CoverInstance& in, CheckReport& report) {
    detail::SubsetEvaluator ev(in.ambient, in.t, config.enumeration, report);
    const std::vector<Mask> tilde = disjointified(in.parts);
    Mask all = 0;
    for (auto m : in.parts) all |= m;
    const double lhs = ev.diversity(all);
    std::vector<Assertion> out;
    for (const auto& [name, beta] : partitions_for(in.parts.size())) {
      double rhs = 0.0;
      double rhs_tilde = 0.0;
      for (const auto& ws : beta.beta()) {
        rhs += ws.weight * ev.diversity(union_mask(in.parts, ws.set));
        rhs_tilde += ws.weight * ev.diversity(union_mask(tilde, ws.set));
      }
      out.push_back(at_most("fractional:" + name, lhs, rhs));
      out.push_back(at_most("disjointified:" + name, lhs, rhs_tilde));
      out.push_back(at_most("disjointified_below_original:" + name, rhs_tilde, rhs));
    }
    return out;
  };
  spec.shrink_candidates = [](const CoverInstance& in) {
    std::vector<CoverInstance> out;
    if (in.ambient.size() <= 1) return out;
    for (std::size_t k = 0; k < in.ambient.size(); ++k) {
      std::vector<Mask> parts;
      for (auto m : in.parts) parts.push_back(drop_bit(m, k));
      out.push_back({without_point(in.ambient, k), in.t, std::move(parts)});
    }
    return out;
  };
  spec.to_json = [](const CoverInstance& in) {
    Json j = with_space(in.ambient, in.t);
    Json parts = Json::array();
    for (auto m : in.parts) parts.push_back(mask_indices(m));
    j["parts"] = std::move(parts);
    return j;
  };
  return run_check("fractional_subadditivity", config, spec);
}

// ---------------------------------------------------------------------------
// Mixtures

namespace {

struct MixtureInstance {
  FiniteMetricSpace ambient;
  double t;
  std::vector<Vector> components;  // disjoint supports, each of unit mass
  std::vector<double> lambdas;
};

MixtureSpec to_spec(const MixtureInstance& in) {
  std::vector<ProbabilityVector> comps;
  for (const auto& c : in.components) comps.emplace_back(c);
  return MixtureSpec(std::move(comps), in.lambdas);
}

}  // namespace

CheckReport check_mixture_inequality(const CheckConfig& config) {
  CheckSpec<MixtureInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace ambient = generate_space(model, rng);
    const double t = draw_scale(model, rng);
    const std::size_t n = ambient.size();
    const std::size_t m = rng.between(1, std::min<std::size_t>(4, n));
    // Each component owns at least one point; the rest are shared out or left
    // unused.
    std::vector<int> owner(n, -1);
    IndexSet order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t c = 0; c < m; ++c) owner[order[c]] = static_cast<int>(c);
    for (std::size_t i = m; i < n; ++i) {
      if (!rng.coin(0.25)) owner[order[i]] = static_cast<int>(rng.index(m));
    }
    std::vector<Vector> components;
    for (std::size_t c = 0; c < m; ++c) {
      IndexSet block;
      for (std::size_t i = 0; i < n; ++i) {
        if (owner[i] == static_cast<int>(c)) block.push_back(i);
      }
      const Vector w = rng.dirichlet(block.size());
      Vector p = Vector::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < block.size(); ++k) {
        p(static_cast<Eigen::Index>(block[k])) = w(static_cast<Eigen::Index>(k));
      }
      components.push_back(std::move(p));
    }
    Vector lambda = rng.dirichlet(m);
    if (m >= 2 && rng.coin(0.25)) {
      lambda(static_cast<Eigen::Index>(rng.index(m))) = 0.0;
      lambda /= lambda.sum();
    }
    return MixtureInstance{std::move(ambient), t, std::move(components),
                           std::vector<double>(lambda.data(), lambda.data() + lambda.size())};
  };
  spec.evaluate = [&](const MixtureInstance& in, CheckReport&) {
    const MixtureSpec mixture = to_spec(in);
    const SimilarityMatrix z = laplace_kernel(in.ambient, in.t);
    const std::size_t m = mixture.size();
    IndexSet everything(m);
    for (std::size_t i = 0; i < m; ++i) everything[i] = i;
    const ProbabilityVector mu = mixture_complexity_inputs(mixture, everything);

    std::vector<Assertion> out;
    for (double alpha : config.alphas) {
      const double lhs = std::exp(alpha_complexity(mu, z, alpha));
      for (const auto& [name, beta] : partitions_for(m)) {
        double rhs = 0.0;
        for (const auto& ws : beta.beta()) {
          double mass = 0.0;
          for (auto i : ws.set) mass += in.lambdas[i];
          if (!(mass > 0.0)) continue;  // weightless components drop out
          rhs += ws.weight * std::exp(alpha_complexity(mixture_complexity_inputs(mixture, ws.set),
                                                       z, alpha));
        }
        out.push_back(at_most("mixture:" + name + ":alpha=" + alpha_name(alpha), lhs, rhs));
      }
    }
    // D_inf <= D_64 <= D_inf * p(x*)^(-1/63), x* the support point maximizing Zp.
    const bool has64 = std::find(config.alphas.begin(), config.alphas.end(), 64.0) != config.alphas.end();
    const bool has_inf = std::any_of(config.alphas.begin(), config.alphas.end(),
                                     [](double a) { return std::isinf(a); });
    if (has64 && has_inf) {
      const double d64 = std::exp(alpha_complexity(mu, z, 64.0));
      const double dinf = std::exp(alpha_complexity(mu, z, kInfinity));
      const Vector u = z.z * mu.values();
      std::size_t top = mu.support().front();
      for (auto i : mu.support()) {
        if (u(static_cast<Eigen::Index>(i)) > u(static_cast<Eigen::Index>(top))) top = i;
      }
      out.push_back(at_most("limit_proxy:lower", dinf, d64));
      out.push_back(at_most("limit_proxy:upper", d64, dinf * std::pow(mu[top], -1.0 / 63.0)));
    }
    return out;
  };
  spec.shrink_candidates = [](const MixtureInstance& in) {
    std::vector<MixtureInstance> out;
    const std::size_t n = in.ambient.size();
    if (n <= 1) return out;
    for (std::size_t k = 0; k < n; ++k) {
      const IndexSet keep = all_but(n, k);
      MixtureInstance next{without_point(in.ambient, k), in.t, {}, {}};
      for (std::size_t c = 0; c < in.components.size(); ++c) {
        Vector p(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
          p(static_cast<Eigen::Index>(i)) = in.components[c](static_cast<Eigen::Index>(keep[i]));
        }
        if (!(p.sum() > 0.0)) continue;  // component vanished with the point
        next.components.push_back(p / p.sum());
        next.lambdas.push_back(in.lambdas[c]);
      }
      double total = 0.0;
      for (double l : next.lambdas) total += l;
      if (next.components.empty() || !(total > 0.0)) continue;
      for (double& l : next.lambdas) l /= total;
      out.push_back(std::move(next));
    }
    return out;
  };
  spec.to_json = [](const MixtureInstance& in) {
    Json j = with_space(in.ambient, in.t);
    Json comps = Json::array();
    for (const auto& c : in.components) comps.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    j["components"] = std::move(comps);
    j["lambdas"] = in.lambdas;
    return j;
  };
  return run_check("mixture_inequality", config, spec);
}

// ---------------------------------------------------------------------------
// Oracle comparisons

namespace {

struct SpaceInstance {
  FiniteMetricSpace space;
  double t;
  std::uint64_t oracle_seed;
};

std::vector<SpaceInstance> space_shrinks(const SpaceInstance& in) {
  std::vector<SpaceInstance> out;
  if (in.space.size() <= 1) return out;
  for (std::size_t k = 0; k < in.space.size(); ++k) {
    out.push_back({without_point(in.space, k), in.t, in.oracle_seed});
  }
  return out;
}

Json space_instance_json(const SpaceInstance& in) {
  Json j = with_space(in.space, in.t);
  j["oracle_seed"] = in.oracle_seed;
  return j;
}

CheckReport oracle_check(const std::string& name, const CheckConfig& config,
                         const std::vector<double>& alphas) {
  CheckSpec<SpaceInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace space = generate_space(model, rng);
    const double t = draw_scale(model, rng);
    return SpaceInstance{std::move(space), t, rng.next()};
  };
  spec.evaluate = [&](const SpaceInstance& in, CheckReport& report) {
    const double exact = detail::audited_diversity(in.space, in.t, config.enumeration, report);
    OracleOptions opts = config.oracle;
    opts.seed = in.oracle_seed;
    std::vector<Assertion> out;
    for (double alpha : alphas) {
      const double found = simplex_oracle(in.space, in.t, alpha, opts);
      out.push_back(equal("alpha=" + alpha_name(alpha), found, exact));
      // Oracle values are lower bounds on D.
      out.push_back(at_most("lower_bound:alpha=" + alpha_name(alpha), found, exact + 1e-9));
    }
    return out;
  };
  spec.shrink_candidates = space_shrinks;
  spec.to_json = space_instance_json;
  return run_check(name, config, spec);
}

}  // namespace

CheckReport check_alpha_independence(const CheckConfig& config) {
  return oracle_check("alpha_independence", config, {0.0, 0.5, 1.0, 2.0, kInfinity});
}

CheckReport check_oracle_equivalence(const CheckConfig& config) {
  return oracle_check("oracle_equivalence", config, {2.0});
}

// ---------------------------------------------------------------------------
// Cardinality limit

CheckReport check_cardinality_limit(const CheckConfig& config) {
  CheckSpec<SpaceInstance> spec;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    FiniteMetricSpace space = generate_space(model, rng);
    if (space.size() >= 2 && space.min_distance() < 0.5) {
      space = space.scaled(0.5 / space.min_distance());
    }
    return SpaceInstance{std::move(space), 100.0, 0};
  };
  spec.evaluate = [&](const SpaceInstance& in, CheckReport& report) {
    const auto& opts = config.enumeration;
    const double n = static_cast<double>(in.space.size());
    const double d1 = detail::audited_diversity(in.space, 1.0, opts, report);
    const double d10 = detail::audited_diversity(in.space, 10.0, opts, report);
    const double d100 = detail::audited_diversity(in.space, 100.0, opts, report);
    return std::vector<Assertion>{
        equal("limit:t=100", d100, n),
        at_most("increasing:1->10", d1, d10),
        at_most("increasing:10->100", d10, d100),
        at_most("bounded_by_cardinality", d100, n),
        at_most("at_least_one", 1.0, d1),
    };
  };
  spec.shrink_candidates = space_shrinks;
  spec.to_json = space_instance_json;
  return run_check("cardinality_limit", config, spec);
}

// ---------------------------------------------------------------------------
// Submodularity survey

namespace {

struct TripleInstance {
  PointedFiniteMetricSpace a;
  PointedFiniteMetricSpace b;
  PointedFiniteMetricSpace c;
  double t;
};

}  // namespace

CheckReport explore_submodularity(const CheckConfig& config) {
  CheckSpec<TripleInstance> spec;
  spec.exploratory = true;
  spec.generate = [&](std::size_t trial, Rng& rng) {
    const RandomModel& model = model_for(config, trial);
    PointedFiniteMetricSpace a = random_pointed(model, rng);
    PointedFiniteMetricSpace b = random_pointed(model, rng);
    PointedFiniteMetricSpace c = random_pointed(model, rng);
    return TripleInstance{std::move(a), std::move(b), std::move(c), draw_scale(model, rng)};
  };
  spec.evaluate = [&](const TripleInstance& in, CheckReport& report) {
    const auto abc = wedge_sum(wedge_sum(in.a, in.b), in.c);
    const auto ac = wedge_sum(in.a, in.c);
    const auto bc = wedge_sum(in.b, in.c);
    const auto& opts = config.enumeration;
    auto kappa = [&](const PointedFiniteMetricSpace& s) {
      return detail::audited_diversity(s.space, in.t, opts, report) - 1.0;
    };
    std::vector<Assertion> out;
    out.push_back(at_most("submodularity", kappa(abc) + kappa(in.c), kappa(ac) + kappa(bc)));

    const auto m_abc = try_magnitude(abc.space, in.t);
    const auto m_c = try_magnitude(in.c.space, in.t);
    const auto m_ac = try_magnitude(ac.space, in.t);
    const auto m_bc = try_magnitude(bc.space, in.t);
    if (m_abc && m_c && m_ac && m_bc) {
      const double dev = std::abs(*m_abc + *m_c - *m_ac - *m_bc);
      report.magnitude_identity_worst = std::max(report.magnitude_identity_worst.value_or(0.0), dev);
    }
    return out;
  };
  spec.shrink_candidates = [](const TripleInstance& in) {
    std::vector<TripleInstance> out;
    for (auto& a : pointed_shrinks(in.a)) out.push_back({std::move(a), in.b, in.c, in.t});
    for (auto& b : pointed_shrinks(in.b)) out.push_back({in.a, std::move(b), in.c, in.t});
    for (auto& c : pointed_shrinks(in.c)) out.push_back({in.a, in.b, std::move(c), in.t});
    return out;
  };
  spec.to_json = [](const TripleInstance& in) {
    return Json{{"A", pointed_json(in.a)},
                {"B", pointed_json(in.b)},
                {"C", pointed_json(in.c)},
                {"t", in.t}};
  };
  return run_check("explore_submodularity", config, spec);
}

// ---------------------------------------------------------------------------
// Registry

namespace {

RandomModel model(SpaceModel kind, std::size_t n_min, std::size_t n_max, double t_min,
                  double t_max) {
  RandomModel m;
  m.kind = kind;
  m.n_min = n_min;
  m.n_max = n_max;
  m.t_min = t_min;
  m.t_max = t_max;
  return m;
}

std::vector<RandomModel> all_models(std::size_t n_min, std::size_t n_max, double t_min,
                                    double t_max) {
  return {model(SpaceModel::UniformLine, n_min, n_max, t_min, t_max),
          model(SpaceModel::UniformCube, n_min, n_max, t_min, t_max),
          model(SpaceModel::ShortestPath, n_min, n_max, t_min, t_max)};
}

CheckConfig config(std::vector<RandomModel> models, std::size_t trials, double tol) {
  CheckConfig c;
  c.models = std::move(models);
  c.trials = trials;
  c.tol = tol;
  return c;
}

std::vector<CheckEntry> build_registry() {
  std::vector<CheckEntry> r;
  const auto line_and_paths = [](std::size_t n_min, std::size_t n_max, double t_min, double t_max) {
    return std::vector<RandomModel>{model(SpaceModel::UniformLine, n_min, n_max, t_min, t_max),
                                    model(SpaceModel::ShortestPath, n_min, n_max, t_min, t_max)};
  };
  r.push_back({"diversity_axioms", check_diversity_axioms,
               config(line_and_paths(1, 7, 1.0, 1.0), 500, 1e-9)});
  r.push_back({"one_point_reduction", check_one_point_reduction,
               config(line_and_paths(2, 7, 1.0, 1.0), 300, 1e-9)});
  r.push_back({"wedge_subadditivity", check_wedge_subadditivity,
               config(all_models(1, 5, 0.25, 3.0), 500, 1e-9)});
  {
    CheckConfig c = config({model(SpaceModel::UniformLine, 1, 3, 0.5, 2.0)}, 500, 1e-9);
    c.lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
    c.max_set_size = 3;
    r.push_back({"minkowski_superlinearity", check_minkowski_superlinearity, c});
  }
  r.push_back({"fractional_subadditivity", check_fractional_subadditivity,
               config(all_models(2, 8, 0.5, 2.0), 200, 1e-9)});
  {
    CheckConfig c = config(all_models(2, 8, 0.25, 3.0), 200, 1e-8);
    c.alphas = {0.5, 1.0, 2.0, 64.0, kInfinity};
    r.push_back({"mixture_inequality", check_mixture_inequality, c});
  }
  r.push_back({"alpha_independence", check_alpha_independence,
               config(all_models(1, 6, 0.5, 2.0), 50, 1e-4)});
  r.push_back({"oracle_equivalence", check_oracle_equivalence,
               config({model(SpaceModel::UniformLine, 1, 10, 0.5, 2.0)}, 100, 1e-6)});
  r.push_back({"cardinality_limit", check_cardinality_limit,
               config(all_models(1, 7, 100.0, 100.0), 100, 1e-3)});
  r.push_back({"explore_submodularity", explore_submodularity,
               config(all_models(1, 3, 0.25, 3.0), 200, 1e-9)});
  return r;
}

}  // namespace

const std::vector<CheckEntry>& check_registry() {
  static const std::vector<CheckEntry> registry = build_registry();
  return registry;
}

const CheckEntry& find_check(const std::string& name) {
  for (const auto& entry : check_registry()) {
    if (entry.name == name) return entry;
  }
  throw Error(ErrorCode::Parse, "unknown check '" + name + "'");
}

}  // namespace metricdiv
