#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metricdiv/complexity.hpp"
#include "metricdiv/core.hpp"
#include "metricdiv/io.hpp"
#include "metricdiv/random.hpp"

namespace metricdiv {

enum class SpaceModel { UniformLine, UniformCube, ShortestPath };

std::string to_string(SpaceModel model);

struct RandomModel {
  SpaceModel kind = SpaceModel::UniformLine;
  std::size_t dim = 2;  // cube model only
  std::size_t n_min = 1;
  std::size_t n_max = 7;
  double t_min = 1.0;
  double t_max = 1.0;
};

/// Points uniform on [0, n] (line) or [0, 2]^dim (cube), or shortest-path
/// distances over a complete graph with weights uniform in [0.1, 2]. Points
/// closer than 1e-3 are redrawn so every output is a valid metric.
FiniteMetricSpace generate_space(const RandomModel& model, Rng& rng);
FiniteMetricSpace generate_space(const RandomModel& model, std::size_t n, Rng& rng);
double draw_scale(const RandomModel& model, Rng& rng);

/// Set function under test. Receives the induced subspace (possibly empty)
/// and the scale t.
struct SetFunction {
  std::string name;
  std::function<double(const FiniteMetricSpace&, double)> eval;
};

/// "kappa" (exp C^t - 1), "complexity" (C^t), "diameter", and the
/// non-diversity "cardinality" (#A, which is 1 on singletons).
SetFunction named_set_function(const std::string& name);

struct Violation {
  std::string assertion;
  Json instance;
  double lhs;
  double rhs;
  double slack;
};

struct CheckReport {
  std::string check_name;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::size_t assertions = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // shrunk, at most kMaxRecordedViolations
  std::optional<double> worst_slack;
  double elapsed_seconds = 0.0;

  // Audit of every maximum-diversity computation made by the check.
  std::size_t certificates_checked = 0;
  std::size_t certificate_failures = 0;
  double worst_certificate_residual = 0.0;

  // Exploratory checks tally outcomes instead of failing.
  bool exploratory = false;
  std::size_t satisfied = 0;
  std::size_t violated = 0;
  std::optional<double> max_slack;
  std::optional<double> magnitude_identity_worst;

  bool passed() const { return exploratory || violation_count == 0; }
};

inline constexpr std::size_t kMaxRecordedViolations = 16;

/// Report as JSON, without wall-clock time.
Json report_to_json(const CheckReport& report);

struct CheckConfig {
  std::vector<RandomModel> models;  // trial i uses models[i % size]
  std::size_t trials = 100;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::optional<SetFunction> delta;  // diversity_axioms only; empty means kappa
  std::vector<double> alphas;        // mixture_inequality
  std::vector<double> lambdas;       // minkowski_superlinearity
  std::size_t max_set_size = 3;      // minkowski_superlinearity
  EnumerationOptions enumeration;
  OracleOptions oracle;
};

CheckReport check_diversity_axioms(const CheckConfig& config);
CheckReport check_one_point_reduction(const CheckConfig& config);
CheckReport check_wedge_subadditivity(const CheckConfig& config);
CheckReport check_minkowski_superlinearity(const CheckConfig& config);
CheckReport check_fractional_subadditivity(const CheckConfig& config);
CheckReport check_mixture_inequality(const CheckConfig& config);
CheckReport check_alpha_independence(const CheckConfig& config);
CheckReport check_oracle_equivalence(const CheckConfig& config);
CheckReport check_cardinality_limit(const CheckConfig& config);
CheckReport explore_submodularity(const CheckConfig& config);

struct CheckEntry {
  std::string name;
  CheckReport (*run)(const CheckConfig&);
  CheckConfig defaults;
};

/// All checks in their default configuration, in a fixed order.
const std::vector<CheckEntry>& check_registry();
const CheckEntry& find_check(const std::string& name);

}  // namespace metricdiv
