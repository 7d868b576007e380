#include "metricdiv/harness.hpp"

#include <algorithm>
#include <cmath>

#include "harness_detail.hpp"

namespace metricdiv {

std::string to_string(SpaceModel model) {
  switch (model) {
    case SpaceModel::UniformLine: return "uniform_points_on_line";
    case SpaceModel::UniformCube: return "uniform_points_in_cube";
    case SpaceModel::ShortestPath: return "random_metric_via_shortest_path";
  }
  return "unknown";
}

namespace {

constexpr double kMinSeparation = 1e-3;

FiniteMetricSpace shortest_path_space(std::size_t n, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix d = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d(i, j) = d(j, i) = rng.uniform(0.1, 2.0);
  }
  // Floyd-Warshall; the result satisfies the triangle inequality exactly up
  // to the rounding of single additions.
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return validate_metric(d);
}

}  // namespace

FiniteMetricSpace generate_space(const RandomModel& model, std::size_t n, Rng& rng) {
  if (model.kind == SpaceModel::ShortestPath) return shortest_path_space(n, rng);
  const std::size_t dim = model.kind == SpaceModel::UniformLine ? 1 : std::max<std::size_t>(1, model.dim);
  const double extent = model.kind == SpaceModel::UniformLine ? static_cast<double>(n) : 2.0;
  for (;;) {
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points) {
      for (auto& c : p) c = rng.uniform(0.0, extent);
    }
    try {
      FiniteMetricSpace space = metric_from_points(points, Norm::Euclidean);
      if (space.min_distance() >= kMinSeparation) return space;
    } catch (const Error&) {
      // coincident draw; try again
    }
  }
}

FiniteMetricSpace generate_space(const RandomModel& model, Rng& rng) {
  const std::size_t n = rng.between(model.n_min, std::max(model.n_min, model.n_max));
  return generate_space(model, n, rng);
}

double draw_scale(const RandomModel& model, Rng& rng) {
  if (model.t_max <= model.t_min) return model.t_min;
  return rng.uniform(model.t_min, model.t_max);
}

SetFunction named_set_function(const std::string& name) {
  if (name == "kappa") {
    return {name, [](const FiniteMetricSpace& s, double t) {
              return s.empty() ? 0.0 : max_diversity_exact(s, t).kappa;
            }};
  }
  if (name == "complexity") {
    return {name, [](const FiniteMetricSpace& s, double t) {
              return s.empty() ? 0.0 : max_diversity_exact(s, t).complexity;
            }};
  }
  if (name == "diameter") {
    return {name, [](const FiniteMetricSpace& s, double) {
              return s.empty() ? 0.0 : s.distances().maxCoeff();
            }};
  }
  if (name == "cardinality") {
    return {name, [](const FiniteMetricSpace& s, double) { return static_cast<double>(s.size()); }};
  }
  throw Error(ErrorCode::Parse, "unknown set function '" + name +
                                    "' (expected kappa, complexity, diameter or cardinality)");
}

Json report_to_json(const CheckReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(Json{{"assertion", v.assertion},
                              {"instance", v.instance},
                              {"lhs", v.lhs},
                              {"rhs", v.rhs},
                              {"slack", v.slack}});
  }
  Json j{{"check", report.check_name},
         {"seed", report.seed},
         {"trials", report.trials},
         {"tolerance", report.tolerance},
         {"assertions", report.assertions},
         {"violation_count", report.violation_count},
         {"worst_slack", report.worst_slack ? Json(*report.worst_slack) : Json(nullptr)},
         {"violations", std::move(violations)},
         {"certificates",
          Json{{"checked", report.certificates_checked},
               {"failures", report.certificate_failures},
               {"worst_residual", report.worst_certificate_residual}}},
         {"exploratory", report.exploratory},
         {"passed", report.passed()}};
  if (report.exploratory) {
    j["satisfied"] = report.satisfied;
    j["violated"] = report.violated;
    j["max_slack"] = report.max_slack ? Json(*report.max_slack) : Json(nullptr);
    j["magnitude_identity_worst"] =
        report.magnitude_identity_worst ? Json(*report.magnitude_identity_worst) : Json(nullptr);
  }
  return j;
}

namespace detail {

IndexSet all_but(std::size_t n, std::size_t k) {
  IndexSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != k) out.push_back(i);
  }
  return out;
}

Mask random_mask(std::size_t n, Rng& rng) {
  Mask m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.coin()) m |= Mask{1} << i;
  }
  return m;
}

Mask random_nonempty_mask(std::size_t n, Rng& rng) {
  for (;;) {
    const Mask m = random_mask(n, rng);
    if (m != 0) return m;
  }
}

double audited_diversity(const FiniteMetricSpace& space, double t,
                         const EnumerationOptions& options, CheckReport& report) {
  const DiversityResult r = max_diversity_exact(space, t, options);
  ++report.certificates_checked;
  const double residual = std::max(r.support_residual, -r.certificate_gap);
  report.worst_certificate_residual = std::max(report.worst_certificate_residual, residual);
  if (!certificate_holds(r)) ++report.certificate_failures;
  return r.diversity;
}

double SubsetEvaluator::diversity(Mask mask) {
  if (mask == 0) return 1.0;
  if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
  const double d = audited_diversity(ambient_.subspace(mask_indices(mask)), t_, options_, report_);
  memo_.emplace(mask, d);
  return d;
}

}  // namespace detail

}  // namespace metricdiv
