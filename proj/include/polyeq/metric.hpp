#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polyeq {

inline constexpr double kDefaultTriangleTol = 1e-9;

/// Axiom of a finite metric that a candidate distance matrix can violate.
enum class Axiom { Diagonal, Symmetry, Positivity, Triangle };

const char* axiom_name(Axiom axiom);

/// One violated axiom. For Triangle, `via` is the intermediate point k with
/// d(i,j) > d(i,k) + d(k,j) + eps; for the other axioms `via` is unused.
struct Violation {
  Axiom axiom;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t via = 0;

  std::string describe() const;
};

/// Thrown when a distance matrix fails one or more metric axioms.
class MetricError : public std::invalid_argument {
 public:
  explicit MetricError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct MetricValidation;

/// Labeled points with a validated symmetric distance matrix. Immutable; the
/// only way to obtain one is through validation.
class FiniteMetricSpace {
 public:
  /// Validates and throws MetricError on any violated axiom.
  static FiniteMetricSpace from_matrix(const Eigen::MatrixXd& dist,
                                       std::vector<std::string> labels = {},
                                       double eps_tri = kDefaultTriangleTol);

  std::size_t size() const { return labels_.size(); }
  double distance(std::size_t j, std::size_t i) const {
    return dist_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  const Eigen::MatrixXd& matrix() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Entrywise d^p. At p = 0 the off-diagonal entries are 1 and the diagonal 0.
  Eigen::MatrixXd power_matrix(double p) const;

 private:
  FiniteMetricSpace(Eigen::MatrixXd dist, std::vector<std::string> labels)
      : dist_(std::move(dist)), labels_(std::move(labels)) {}

  friend MetricValidation validate_metric(const Eigen::MatrixXd&, double,
                                          std::vector<std::string>);

  Eigen::MatrixXd dist_;
  std::vector<std::string> labels_;
};

struct MetricValidation {
  std::optional<FiniteMetricSpace> space;
  std::vector<Violation> violations;

  bool ok() const { return space.has_value(); }
};

/// Checks every axiom and collects all violations. Throws std::invalid_argument
/// for structural problems (empty or non-square input, non-finite entries,
/// label count mismatch). Missing labels default to "0", "1", ...
MetricValidation validate_metric(const Eigen::MatrixXd& dist,
                                 double eps_tri = kDefaultTriangleTol,
                                 std::vector<std::string> labels = {});

/// Replaces every distance d by d^{p/2}; 0 <= p <= 2.
FiniteMetricSpace metric_transform(const FiniteMetricSpace& space, double p);

/// Shortest-path metric of the n-cycle, n >= 3.
FiniteMetricSpace cycle_metric(std::size_t n);

/// Random ultrametric on n >= 2 points. Points are merged pairwise in random
/// order; the k-th merge gets the k-th smallest of n-1 distinct heights drawn
/// from [1, 1.5], and d(a,b) is the height of the merge that first joins a and
/// b. Deterministic for a fixed seed.
FiniteMetricSpace random_ultrametric(std::size_t n, std::uint64_t seed);

/// Exhaustive check of d(x,z) <= max(d(x,y), d(y,z)) + eps over all triples.
bool is_ultrametric(const FiniteMetricSpace& space, double eps = 0.0);

}  // namespace polyeq
