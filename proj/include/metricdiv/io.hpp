#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

#include "metricdiv/complexity.hpp"
#include "metricdiv/constructions.hpp"
#include "metricdiv/core.hpp"

namespace metricdiv {

using Json = nlohmann::ordered_json;

struct LoadedSpace {
  FiniteMetricSpace space;
  std::optional<std::size_t> basepoint;
};

/// n rows of n decimal floats, optionally preceded by a header row of labels.
/// Malformed text raises Parse; metric violations raise the validate_metric
/// errors.
FiniteMetricSpace read_distance_csv(std::istream& in);

/// Either {"points": [[...]], "metric": "euclidean"|"l1"|"linf"} or
/// {"distances": [[...]]}, each with optional "labels" and "basepoint".
LoadedSpace read_space_json(std::istream& in);

/// Dispatches on the extension (.csv or .json); Io if the file cannot be read.
LoadedSpace load_space(const std::string& path);

void write_distance_csv(std::ostream& out, const FiniteMetricSpace& space);

/// Reals printed with 12 significant digits.
std::string format_csv_number(double value);

Json space_to_json(const FiniteMetricSpace& space);
Json pointed_space_to_json(const PointedFiniteMetricSpace& space);

Json partition_to_json(const FractionalPartition& beta);
FractionalPartition partition_from_json(const Json& j);

/// {"D", "C", "kappa", "support" (labels), "maximizer", "certificate_gap", "t"}.
Json diversity_to_json(const DiversityResult& result, const FiniteMetricSpace& space, double t);

}  // namespace metricdiv
