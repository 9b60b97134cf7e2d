#include "polyeq/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace polyeq::io {

namespace {

void require_fields(const json& doc, const std::set<std::string>& required,
                    const std::set<std::string>& optional, const char* what) {
  if (!doc.is_object()) throw FormatError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw FormatError(std::string(what) + ": unknown field \"" + key + "\"");
    }
  }
  for (const auto& key : required) {
    if (!doc.contains(key)) throw FormatError(std::string(what) + ": missing field \"" + key + "\"");
  }
}

double as_number(const json& value, const char* what) {
  if (!value.is_number()) throw FormatError(std::string(what) + " must be a number");
  return value.get<double>();
}

Eigen::MatrixXd as_matrix(const json& rows, const char* what, bool square) {
  if (!rows.is_array() || rows.empty()) {
    throw FormatError(std::string(what) + " must be a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (!rows[0].is_array()) throw FormatError(std::string(what) + " rows must be arrays");
  const auto m = static_cast<Eigen::Index>(rows[0].size());
  if (square && m != n) throw FormatError(std::string(what) + " must be square");
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
      throw FormatError(std::string(what) + " rows must have equal length");
    }
    for (Eigen::Index c = 0; c < m; ++c) out(r, c) = as_number(row[static_cast<std::size_t>(c)], what);
  }
  return out;
}

std::vector<Vertex> as_vertices(const json& list, const char* what) {
  if (!list.is_array()) throw FormatError(std::string(what) + " must be an array");
  std::vector<Vertex> out;
  for (const auto& item : list) {
    require_fields(item, {"id", "w"}, {}, what);
    if (!item["id"].is_number_integer() || item["id"].get<long long>() < 0) {
      throw FormatError(std::string(what) + ": id must be a non-negative integer");
    }
    out.push_back({item["id"].get<std::size_t>(), as_number(item["w"], what)});
  }
  return out;
}

Universe universe_from_json(const json& doc, const ParseOptions& options) {
  if (doc.is_object() && doc.contains("dist")) return metric_from_json(doc, options.eps_tri);
  if (doc.is_object() && doc.contains("points")) return points_from_json(doc, options.eps_c);
  throw FormatError("universe must be a metric {labels, dist} or a point set {p, points}");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

FiniteMetricSpace metric_from_json(const json& doc, double eps_tri) {
  require_fields(doc, {"labels", "dist"}, {}, "metric file");
  const Eigen::MatrixXd dist = as_matrix(doc["dist"], "dist", true);
  if (!doc["labels"].is_array()) throw FormatError("labels must be an array of strings");
  std::vector<std::string> labels;
  for (const auto& label : doc["labels"]) {
    if (!label.is_string()) throw FormatError("labels must be an array of strings");
    labels.push_back(label.get<std::string>());
  }
  if (labels.size() != static_cast<std::size_t>(dist.rows())) {
    throw FormatError("label count does not match the distance matrix");
  }
  return FiniteMetricSpace::from_matrix(dist, std::move(labels), eps_tri);
}

json metric_to_json(const FiniteMetricSpace& space) {
  return {{"labels", space.labels()}, {"dist", to_json(space.matrix())}};
}

LpPointSet points_from_json(const json& doc, double eps_c) {
  require_fields(doc, {"p", "points"}, {}, "point-set file");
  return LpPointSet(as_number(doc["p"], "p"), as_matrix(doc["points"], "points", false), eps_c);
}

json points_to_json(const LpPointSet& points) {
  return {{"p", points.p()}, {"points", to_json(points.coords())}};
}

SimplexFile simplex_from_json(const json& doc, const std::filesystem::path& base_dir,
                              const ParseOptions& options) {
  require_fields(doc, {"universe", "x", "y"}, {}, "simplex file");
  const auto& ref = doc["universe"];
  json universe_doc;
  if (ref.is_string()) {
    std::filesystem::path path = ref.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    universe_doc = read_json_file(path);
  } else {
    universe_doc = ref;
  }
  Universe universe = universe_from_json(universe_doc, options);
  const std::size_t size = std::visit([](const auto& u) { return u.size(); }, universe);
  SignedSimplex simplex(size, as_vertices(doc["x"], "x"), as_vertices(doc["y"], "y"),
                        options.eps_w);
  return {std::move(universe), std::move(simplex)};
}

json simplex_to_json(const SignedSimplex& simplex, const json& universe_ref) {
  json doc = to_json(simplex);
  doc["universe"] = universe_ref;
  return doc;
}

Families families_from_json(const json& doc) {
  require_fields(doc, {"xs", "ys"}, {"p"}, "families file");
  Families out;
  if (doc.contains("p")) out.p = as_number(doc["p"], "p");
  for (const auto& [key, target] : {std::pair{"xs", &out.xs}, std::pair{"ys", &out.ys}}) {
    const Eigen::MatrixXd rows = as_matrix(doc[key], key, false);
    for (Eigen::Index r = 0; r < rows.rows(); ++r) target->push_back(rows.row(r).transpose());
  }
  return out;
}

json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(number(v(k)));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const EigenCertificate& cert) {
  return {{"p", cert.p},
          {"holds", cert.holds},
          {"lambda_max", number(cert.lambda_max)},
          {"eps_eig", cert.eps_eig},
          {"dimension", cert.dimension}};
}

json to_json(const RoundnessReport& report) {
  json certs = {{"low", to_json(report.certificate_low)}};
  certs["high"] = report.certificate_high ? to_json(*report.certificate_high) : json(nullptr);
  return {{"roundness", report.roundness}, {"at_cap", report.at_cap},
          {"iterations", report.iterations}, {"p_max", report.p_max},
          {"tol_p", report.tol_p},          {"certificates", certs}};
}

json to_json(const EqualityWitness& witness) {
  return {{"p", witness.p},
          {"alpha", to_json(witness.alpha)},
          {"residual", witness.residual},
          {"tolerance", witness.tolerance}};
}

json to_json(const RepeatingNumbers& reps) {
  json out = json::array();
  for (const auto& [point, rep] : reps) out.push_back({{"id", point}, {"m", rep.m}, {"n", rep.n}});
  return out;
}

json to_json(const SignedSimplex& simplex) {
  auto side = [](const std::vector<Vertex>& vertices) {
    json out = json::array();
    for (const auto& v : vertices) out.push_back({{"id", v.point}, {"w", v.weight}});
    return out;
  };
  return {{"x", side(simplex.xs())}, {"y", side(simplex.ys())}};
}

json to_json(const CoordinateReport& coord) {
  json clusters = json::array();
  for (const auto& c : coord.clusters) {
    clusters.push_back({{"value", c.value}, {"m", c.m}, {"n", c.n}});
  }
  return {{"omega", coord.omega},
          {"clusters", clusters},
          {"degenerate", coord.degenerate},
          {"balanced", coord.balanced}};
}

json to_json(const VdReport& report) {
  json coords = json::array();
  for (const auto& c : report.coordinates) coords.push_back(to_json(c));
  return {{"virtually_degenerate", report.virtually_degenerate}, {"coordinates", coords}};
}

json to_json(const AffineReport& report) {
  return {{"rank", report.rank},
          {"dependent", report.dependent},
          {"dependency", report.dependency ? to_json(*report.dependency) : json(nullptr)}};
}

json to_json(const ElsnerReport& report) {
  return {{"equality_holds", report.equality_holds},
          {"per_coordinate_identical", report.per_coordinate_identical},
          {"residual", report.residual},
          {"tolerance", report.tolerance},
          {"consistent", report.consistent}};
}

json to_json(const PairHypotheses& hyp) {
  return {{"independent", hyp.independent},
          {"supports_intersect", hyp.supports_intersect},
          {"restrictions_dependent", hyp.restrictions_dependent},
          {"shared_support", hyp.shared_support},
          {"kappa", hyp.kappa ? json(*hyp.kappa) : json(nullptr)}};
}

json to_json(const ObstructionReport& report) {
  return {{"obstructed", report.obstructed},
          {"p", report.p},
          {"q", report.q},
          {"source_strict_q", to_json(report.source_strict_q)},
          {"source_strict_p", to_json(report.source_strict_p)},
          {"witness_residual", report.witness_residual},
          {"witness_tolerance", report.witness_tolerance},
          {"verdict", report.verdict}};
}

}  // namespace polyeq::io
