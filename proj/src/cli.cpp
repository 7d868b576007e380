#include "metricdiv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "metricdiv/complexity.hpp"
#include "metricdiv/harness.hpp"
#include "metricdiv/io.hpp"

namespace metricdiv {

namespace {

struct Options {
  std::string input;
  std::vector<double> t;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<std::size_t> t_steps;
  std::vector<std::string> alphas;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::string format = "json";
  std::string output;
  unsigned threads = 1;
  std::vector<std::string> checks;
  std::string delta;
  std::size_t random_n = 0;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare:
    case ErrorCode::NonFinite:
    case ErrorCode::Asymmetric:
    case ErrorCode::NonzeroDiagonal:
    case ErrorCode::NonpositiveOffDiagonal:
    case ErrorCode::TriangleViolation:
    case ErrorCode::LabelMismatch:
    case ErrorCode::DuplicatePoints:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnknownMetric:
    case ErrorCode::InvalidBasepoint:
      return kExitInvalidMetric;
    case ErrorCode::TooLarge:
      return kExitTooLarge;
    default:
      return kExitUsage;
  }
}

double parse_alpha(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "infinity" || s == "+inf") return kInfinity;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v >= 0.0)) {
    throw UsageError("invalid alpha '" + text + "'");
  }
  return v;
}

std::vector<double> alpha_list(const Options& o, std::vector<double> fallback) {
  if (o.alphas.empty()) return fallback;
  std::vector<double> out;
  for (const auto& a : o.alphas) out.push_back(parse_alpha(a));
  return out;
}

Json alpha_json(double alpha) { return std::isinf(alpha) ? Json("inf") : Json(alpha); }

std::string alpha_text(double alpha) {
  return std::isinf(alpha) ? std::string("inf") : format_csv_number(alpha);
}

EnumerationOptions enumeration_options(const Options& o) {
  EnumerationOptions e;
  e.workers = std::max(1u, o.threads);
  if (const char* env = std::getenv("METRICDIV_MAX_N")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v == 0) {
      throw UsageError(std::string("METRICDIV_MAX_N must be a positive integer, got '") + env + "'");
    }
    e.max_points = static_cast<std::size_t>(v);
  }
  return e;
}

double single_t(const Options& o) {
  if (o.t.size() > 1) throw UsageError("--t takes a single value here");
  const double t = o.t.empty() ? 1.0 : o.t.front();
  if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("--t must be positive");
  return t;
}

FiniteMetricSpace input_space(const Options& o) {
  if (o.input.empty()) throw UsageError("--input is required");
  return load_space(o.input).space;
}

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") {
    throw UsageError("--format must be json or csv");
  }
}

int cmd_compute(const Options& o, std::ostream& out, std::ostream&) {
  const double t = single_t(o);
  const FiniteMetricSpace space = input_space(o);
  const DiversityResult r = max_diversity_exact(space, t, enumeration_options(o));
  if (o.format == "csv") {
    out << "t,D,C,kappa,certificate_gap\n"
        << format_csv_number(t) << ',' << format_csv_number(r.diversity) << ','
        << format_csv_number(r.complexity) << ',' << format_csv_number(r.kappa) << ','
        << format_csv_number(r.certificate_gap) << '\n';
  } else {
    out << diversity_to_json(r, space, t).dump(2) << '\n';
  }
  return kExitOk;
}

std::vector<double> profile_grid(const Options& o) {
  const bool ranged = o.t_min || o.t_max || o.t_steps;
  if (ranged && !o.t.empty()) throw UsageError("use either --t or --t-min/--t-max/--t-steps");
  if (!ranged) {
    std::vector<double> grid = o.t.empty() ? std::vector<double>{1.0} : o.t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
        throw UsageError("--t values must be positive and increasing");
      }
    }
    return grid;
  }
  if (!o.t_min || !o.t_max || !o.t_steps) {
    throw UsageError("--t-min, --t-max and --t-steps must be given together");
  }
  return linear_grid(*o.t_min, *o.t_max, *o.t_steps);
}

int cmd_profile(const Options& o, std::ostream& out, std::ostream&) {
  const std::vector<double> grid = profile_grid(o);
  const FiniteMetricSpace space = input_space(o);
  const ComplexityProfile profile = complexity_profile(space, grid, enumeration_options(o));
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& e : profile.entries) {
      rows.push_back(Json{{"t", e.t}, {"D", e.diversity}, {"C", e.complexity}, {"kappa", e.kappa}});
    }
    out << rows.dump(2) << '\n';
  } else {
    out << "t,D,C,kappa\n";
    for (const auto& e : profile.entries) {
      out << format_csv_number(e.t) << ',' << format_csv_number(e.diversity) << ','
          << format_csv_number(e.complexity) << ',' << format_csv_number(e.kappa) << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<const CheckEntry*> selected;
  if (o.checks.empty()) {
    for (const auto& entry : check_registry()) selected.push_back(&entry);
  } else {
    for (const auto& name : o.checks) {
      try {
        selected.push_back(&find_check(name));
      } catch (const Error&) {
        throw UsageError("unknown check '" + name + "'");
      }
    }
  }
  std::optional<SetFunction> delta;
  if (!o.delta.empty()) {
    try {
      delta = named_set_function(o.delta);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (o.trials && *o.trials == 0) throw UsageError("--trials must be at least 1");
  if (o.tol && !(*o.tol >= 0.0)) throw UsageError("--tol must be nonnegative");
  const EnumerationOptions enumeration = enumeration_options(o);

  Json reports = Json::array();
  bool ok = true;
  for (const CheckEntry* entry : selected) {
    CheckConfig config = entry->defaults;
    if (o.seed) config.seed = *o.seed;
    if (o.trials) config.trials = *o.trials;
    if (o.tol) config.tol = *o.tol;
    if (!o.alphas.empty() && !config.alphas.empty()) config.alphas = alpha_list(o, {});
    config.enumeration = enumeration;
    config.delta = delta;
    const CheckReport report = entry->run(config);
    ok = ok && report.passed();
    err << report.check_name << ": "
        << (report.exploratory ? "explored" : report.passed() ? "passed" : "FAILED") << " ("
        << report.trials << " trials, " << report.violation_count << " violations, "
        << report.elapsed_seconds << " s)\n";
    reports.push_back(report_to_json(report));
  }
  if (o.format == "csv") {
    out << "check,passed,trials,assertions,violation_count,worst_slack\n";
    for (const auto& r : reports) {
      out << r["check"].get<std::string>() << ',' << (r["passed"].get<bool>() ? "true" : "false")
          << ',' << r["trials"].get<std::size_t>() << ',' << r["assertions"].get<std::size_t>()
          << ',' << r["violation_count"].get<std::size_t>() << ','
          << (r["worst_slack"].is_null() ? "" : format_csv_number(r["worst_slack"].get<double>()))
          << '\n';
    }
  } else {
    out << reports.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
  const double t = single_t(o);
  FiniteMetricSpace space = [&] {
    if (o.random_n > 0) {
      if (!o.input.empty()) throw UsageError("use either --input or --random");
      RandomModel model;
      model.kind = SpaceModel::ShortestPath;
      Rng rng(o.seed.value_or(1));
      return generate_space(model, o.random_n, rng);
    }
    return input_space(o);
  }();
  const std::vector<double> alphas = alpha_list(o, {0.0, 0.5, 1.0, 2.0, kInfinity});
  const double exact = max_diversity_exact(space, t, enumeration_options(o)).diversity;
  OracleOptions opts;
  opts.seed = o.seed.value_or(1);

  std::vector<double> found;
  double spread = 0.0;
  for (double alpha : alphas) {
    found.push_back(simplex_oracle(space, t, alpha, opts));
    spread = std::max(spread, std::abs(found.back() - exact));
  }
  if (o.format == "csv") {
    out << "alpha,oracle,exact,abs_error\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      out << alpha_text(alphas[i]) << ',' << format_csv_number(found[i]) << ','
          << format_csv_number(exact) << ',' << format_csv_number(std::abs(found[i] - exact))
          << '\n';
    }
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      rows.push_back(Json{{"alpha", alpha_json(alphas[i])},
                          {"oracle", found[i]},
                          {"abs_error", std::abs(found[i] - exact)}});
    }
    out << Json{{"t", t}, {"n", space.size()}, {"exact", exact}, {"oracle", std::move(rows)},
                {"spread", spread}}
               .dump(2)
        << '\n';
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", o.output, "Write data to this file instead of stdout");
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Distance-matrix CSV or point-cloud JSON");
  cmd->add_option("--threads", o.threads, "Worker threads for subset enumeration")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum diversity, magnitude and metric complexity of finite metric spaces",
               "metricdiv"};
  app.require_subcommand(1);
  Options o;

  auto* compute = app.add_subcommand("compute", "Maximum diversity of one space at scale t");
  add_input(compute, o);
  compute->add_option("--t", o.t, "Scale (default 1)")->expected(1);
  add_common(compute, o);

  auto* profile = app.add_subcommand("profile", "Diversity over a grid of scales");
  add_input(profile, o);
  profile->add_option("--t", o.t, "Explicit scales, increasing")->delimiter(',');
  profile->add_option("--t-min", o.t_min, "Smallest scale");
  profile->add_option("--t-max", o.t_max, "Largest scale");
  profile->add_option("--t-steps", o.t_steps, "Number of grid points");
  auto* profile_format = profile->add_option("--format", o.format, "Output format (default csv)")
                             ->check(CLI::IsMember({"json", "csv"}));
  profile->add_option("--output", o.output, "Write data to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run property checks");
  verify->add_option("checks", o.checks, "Checks to run (default: all)");
  verify->add_option("--seed", o.seed, "Base seed");
  verify->add_option("--trials", o.trials, "Trials per check");
  verify->add_option("--tol", o.tol, "Tolerance override");
  verify->add_option("--alpha", o.alphas, "Orders for the mixture check")->delimiter(',');
  verify->add_option("--delta", o.delta,
                     "Set function for diversity_axioms: kappa, complexity, diameter, cardinality");
  verify->add_option("--threads", o.threads, "Worker threads for subset enumeration")
      ->check(CLI::PositiveNumber);
  add_common(verify, o);

  auto* oracle = app.add_subcommand("oracle", "Compare simplex optimization with exact enumeration");
  add_input(oracle, o);
  oracle->add_option("--random", o.random_n, "Use a random shortest-path space with N points");
  oracle->add_option("--t", o.t, "Scale (default 1)")->expected(1);
  oracle->add_option("--alpha", o.alphas, "Orders, e.g. 0,0.5,1,2,inf")->delimiter(',');
  oracle->add_option("--seed", o.seed, "Seed for restarts and --random");
  add_common(oracle, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (profile->parsed() && profile_format->count() == 0) o.format = "csv";

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    if (!o.format.empty()) check_format(o);
    const auto start = std::chrono::steady_clock::now();
    if (compute->parsed()) status = cmd_compute(o, buffer, err);
    if (profile->parsed()) status = cmd_profile(o, buffer, err);
    if (verify->parsed()) status = cmd_verify(o, buffer, err);
    if (oracle->parsed()) status = cmd_oracle(o, buffer, err);
    err << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
        << " s\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (o.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.output, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error: cannot write " << o.output << '\n';
      return kExitUsage;
    }
  }
  return status;
}

}  // namespace metricdiv
