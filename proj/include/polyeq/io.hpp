#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "polyeq/hilbert.hpp"
#include "polyeq/lp.hpp"
#include "polyeq/metric.hpp"
#include "polyeq/negtype.hpp"
#include "polyeq/simplex.hpp"

namespace polyeq::io {

using nlohmann::json;

/// Malformed or schema-violating input file.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline; byte-stable for equal content.
void write_json_file(const std::filesystem::path& path, const json& doc);

// Metric file: {"labels": [...], "dist": [[...], ...]}
FiniteMetricSpace metric_from_json(const json& doc, double eps_tri = kDefaultTriangleTol);
json metric_to_json(const FiniteMetricSpace& space);

// Point-set file: {"p": 1.0, "points": [[...], ...]}
LpPointSet points_from_json(const json& doc, double eps_c = kDefaultCoordinateTol);
json points_to_json(const LpPointSet& points);

using Universe = std::variant<FiniteMetricSpace, LpPointSet>;

struct SimplexFile {
  Universe universe;
  SignedSimplex simplex;
};

struct ParseOptions {
  double eps_tri = kDefaultTriangleTol;
  double eps_c = kDefaultCoordinateTol;
  double eps_w = kDefaultWeightTol;
};

/// Simplex file: {"universe": "<path>" | {inline metric or point set},
/// "x": [{"id": 0, "w": 1.0}, ...], "y": [...]}. Relative universe paths
/// resolve against `base_dir`.
SimplexFile simplex_from_json(const json& doc, const std::filesystem::path& base_dir,
                              const ParseOptions& options = {});
json simplex_to_json(const SignedSimplex& simplex, const json& universe_ref);

// Families file: {"p": 1.0, "xs": [[...], ...], "ys": [[...], ...]}; "p" optional.
struct Families {
  std::optional<double> p;
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> ys;
};
Families families_from_json(const json& doc);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
json to_json(const EigenCertificate& cert);
json to_json(const RoundnessReport& report);
json to_json(const EqualityWitness& witness);
json to_json(const RepeatingNumbers& reps);
json to_json(const SignedSimplex& simplex);
json to_json(const CoordinateReport& coord);
json to_json(const VdReport& report);
json to_json(const AffineReport& report);
json to_json(const ElsnerReport& report);
json to_json(const PairHypotheses& hyp);
json to_json(const ObstructionReport& report);

/// Finite doubles as numbers; infinities and NaN as null.
json number(double value);

}  // namespace polyeq::io
