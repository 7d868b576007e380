#include "metricdiv/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace metricdiv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) return std::nullopt;
  return value;
}

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::Parse, "row " + std::to_string(i) + " has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace

FiniteMetricSpace read_distance_csv(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<std::string> first_fields;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (rows.empty() && labels.empty()) first_fields = fields;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = parse_double(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && labels.empty()) {
        labels = fields;
        continue;
      }
      throw Error(ErrorCode::Parse, "non-numeric entry on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "no distance rows");
  // An all-numeric header (labels such as "0", "1") shows up as one extra row.
  if (labels.empty() && rows.size() == rows.front().size() + 1) {
    labels = std::move(first_fields);
    rows.erase(rows.begin());
  }
  return validate_metric(matrix_from_rows(rows), std::move(labels));
}

LoadedSpace read_space_json(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  try {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "expected a JSON object");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

    LoadedSpace out;
    if (j.contains("points")) {
      const auto points = j.at("points").get<std::vector<std::vector<double>>>();
      const std::string metric = j.value("metric", std::string("euclidean"));
      out.space = metric_from_points(points, parse_norm(metric), std::move(labels));
    } else if (j.contains("distances")) {
      const auto rows = j.at("distances").get<std::vector<std::vector<double>>>();
      out.space = validate_metric(matrix_from_rows(rows), std::move(labels));
    } else {
      throw Error(ErrorCode::Parse, "expected a \"points\" or \"distances\" field");
    }
    if (j.contains("basepoint")) {
      const auto base = j.at("basepoint").get<long long>();
      if (base < 0 || static_cast<std::size_t>(base) >= out.space.size()) {
        throw Error(ErrorCode::InvalidBasepoint, "basepoint " + std::to_string(base));
      }
      out.basepoint = static_cast<std::size_t>(base);
    }
    return out;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

LoadedSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (json) return read_space_json(in);
  return LoadedSpace{read_distance_csv(in), std::nullopt};
}

std::string format_csv_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_distance_csv(std::ostream& out, const FiniteMetricSpace& space) {
  const auto& labels = space.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  out << '\n';
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      // %.17g: exact round trip.
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", space.distance(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

Json space_to_json(const FiniteMetricSpace& space) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space.distance(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"distances", std::move(rows)}, {"labels", space.labels()}};
}

Json pointed_space_to_json(const PointedFiniteMetricSpace& space) {
  Json j = space_to_json(space.space);
  j["basepoint"] = space.basepoint;
  return j;
}

Json partition_to_json(const FractionalPartition& beta) {
  Json sets = Json::array();
  for (const auto& ws : beta.beta()) sets.push_back(Json{{"set", ws.set}, {"w", ws.weight}});
  return Json{{"n", beta.n()}, {"beta", std::move(sets)}};
}

FractionalPartition partition_from_json(const Json& j) {
  try {
    std::vector<WeightedSet> beta;
    for (const auto& entry : j.at("beta")) {
      beta.push_back({entry.at("set").get<IndexSet>(), entry.at("w").get<double>()});
    }
    return FractionalPartition(j.at("n").get<std::size_t>(), std::move(beta));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

Json diversity_to_json(const DiversityResult& result, const FiniteMetricSpace& space, double t) {
  Json support = Json::array();
  for (auto i : result.support) support.push_back(space.labels()[i]);
  Json maximizer = Json::array();
  for (Eigen::Index i = 0; i < result.maximizer.values().size(); ++i) {
    maximizer.push_back(result.maximizer.values()(i));
  }
  return Json{{"D", result.diversity},
              {"C", result.complexity},
              {"kappa", result.kappa},
              {"support", std::move(support)},
              {"maximizer", std::move(maximizer)},
              {"certificate_gap", result.certificate_gap},
              {"t", t}};
}

}  // namespace metricdiv
