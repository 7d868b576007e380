#pragma once

// Trial loop, shrinking and memoized subset evaluation shared by the checks.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "metricdiv/harness.hpp"

namespace metricdiv::detail {

using Mask = std::uint64_t;

inline IndexSet mask_indices(Mask mask) {
  IndexSet out;
  for (; mask != 0; mask &= mask - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  return out;
}

inline Mask indices_mask(const IndexSet& indices) {
  Mask m = 0;
  for (auto i : indices) m |= Mask{1} << i;
  return m;
}

/// Deletes bit k and shifts the higher bits down, matching the removal of
/// point k from the ambient space.
inline Mask drop_bit(Mask mask, std::size_t k) {
  const Mask low = mask & ((Mask{1} << k) - 1);
  const Mask high = (mask >> (k + 1)) << k;
  return low | high;
}

inline std::size_t popcount(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

/// Remaining indices after removing point k.
IndexSet all_but(std::size_t n, std::size_t k);

/// Random subset; each point kept with probability 1/2.
Mask random_mask(std::size_t n, Rng& rng);
Mask random_nonempty_mask(std::size_t n, Rng& rng);

/// max_diversity_exact plus a certificate audit recorded in the report.
double audited_diversity(const FiniteMetricSpace& space, double t,
                         const EnumerationOptions& options, CheckReport& report);

/// Memoized D over subsets of one ambient space; D of the empty set is 1.
class SubsetEvaluator {
 public:
  SubsetEvaluator(const FiniteMetricSpace& ambient, double t, const EnumerationOptions& options,
                  CheckReport& report)
      : ambient_(ambient), t_(t), options_(options), report_(report) {}

  double diversity(Mask mask);
  double kappa(Mask mask) { return diversity(mask) - 1.0; }

 private:
  const FiniteMetricSpace& ambient_;
  double t_;
  EnumerationOptions options_;
  CheckReport& report_;
  std::unordered_map<Mask, double> memo_;
};

struct Assertion {
  std::string name;
  double lhs;
  double rhs;
  double slack;  // >= -tol when the assertion holds
};

/// lhs <= rhs.
inline Assertion at_most(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, rhs - lhs};
}

/// |lhs - rhs| small.
inline Assertion equal(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, -std::abs(lhs - rhs)};
}

template <class Instance>
struct CheckSpec {
  std::function<Instance(std::size_t, Rng&)> generate;
  std::function<std::vector<Assertion>(const Instance&, CheckReport&)> evaluate;
  std::function<std::vector<Instance>(const Instance&)> shrink_candidates;
  std::function<Json(const Instance&)> to_json;
  bool exploratory = false;
};

template <class Instance>
CheckReport run_check(const std::string& name, const CheckConfig& config,
                      const CheckSpec<Instance>& spec) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.check_name = name;
  report.trials = config.trials;
  report.seed = config.seed;
  report.tolerance = config.tol;
  report.exploratory = spec.exploratory;

  auto failing = [&](const std::vector<Assertion>& list, const std::string& assertion)
      -> const Assertion* {
    for (const auto& a : list) {
      if (a.name == assertion && a.slack < -config.tol) return &a;
    }
    return nullptr;
  };

  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng rng(config.seed ^ static_cast<std::uint64_t>(trial));
    Instance instance = spec.generate(trial, rng);
    std::vector<Assertion> results;
    try {
      results = spec.evaluate(instance, report);
    } catch (const Error& e) {
      // A computation that cannot be carried out is a failure of the check.
      ++report.violation_count;
      report.worst_slack = std::min(report.worst_slack.value_or(0.0), -1.0);
      if (report.violations.size() < kMaxRecordedViolations) {
        Json j = spec.to_json(instance);
        j["error"] = e.what();
        report.violations.push_back({"error", std::move(j), 0.0, 0.0, -1.0});
      }
      continue;
    }
    for (const auto& a : results) {
      ++report.assertions;
      report.worst_slack = std::min(report.worst_slack.value_or(a.slack), a.slack);
      if (spec.exploratory) {
        report.max_slack = std::max(report.max_slack.value_or(a.slack), a.slack);
        if (a.slack >= -config.tol) {
          ++report.satisfied;
          continue;
        }
        ++report.violated;
      } else if (a.slack >= -config.tol) {
        continue;
      }
      ++report.violation_count;
      if (report.violations.size() >= kMaxRecordedViolations) continue;

      // Greedy shrinking: adopt the first smaller instance that still fails.
      Instance current = instance;
      bool progress = true;
      while (progress) {
        progress = false;
        for (auto& candidate : spec.shrink_candidates(current)) {
          bool fails = false;
          try {
            fails = failing(spec.evaluate(candidate, report), a.name) != nullptr;
          } catch (const Error&) {
            fails = false;
          }
          if (fails) {
            current = std::move(candidate);
            progress = true;
            break;
          }
        }
      }
      const auto confirmed = spec.evaluate(current, report);
      if (const Assertion* f = failing(confirmed, a.name)) {
        report.violations.push_back({a.name, spec.to_json(current), f->lhs, f->rhs, f->slack});
      }
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace metricdiv::detail
