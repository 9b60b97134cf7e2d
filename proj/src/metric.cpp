#include "polyeq/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polyeq/random.hpp"

namespace polyeq {

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "not a metric: " << violations.size() << " violation(s)";
  if (!violations.empty()) out << "; first: " << violations.front().describe();
  return out.str();
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = std::to_string(k);
  return labels;
}

}  // namespace

const char* axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::Diagonal: return "diagonal";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Positivity: return "positivity";
    case Axiom::Triangle: return "triangle";
  }
  return "unknown";
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << axiom_name(axiom) << " at (" << i << "," << j << ")";
  if (axiom == Axiom::Triangle) out << " via " << via;
  return out.str();
}

MetricError::MetricError(std::vector<Violation> violations)
    : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}

MetricValidation validate_metric(const Eigen::MatrixXd& dist, double eps_tri,
                                 std::vector<std::string> labels) {
  const auto n = dist.rows();
  if (n == 0 || dist.cols() != n) {
    throw std::invalid_argument("distance matrix must be square with at least one row");
  }
  if (!dist.allFinite()) throw std::invalid_argument("distance matrix has non-finite entries");
  const auto count = static_cast<std::size_t>(n);
  if (labels.empty()) labels = default_labels(count);
  if (labels.size() != count) {
    throw std::invalid_argument("label count does not match the distance matrix");
  }

  std::vector<Violation> violations;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (dist(j, j) != 0.0) violations.push_back({Axiom::Diagonal, uj, uj, 0});
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const auto uj = static_cast<std::size_t>(j);
      const auto ui = static_cast<std::size_t>(i);
      if (dist(j, i) != dist(i, j)) violations.push_back({Axiom::Symmetry, uj, ui, 0});
      if (!(dist(j, i) > 0.0) || !(dist(i, j) > 0.0)) {
        violations.push_back({Axiom::Positivity, uj, ui, 0});
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == j || k == i) continue;
        if (dist(j, i) > dist(j, k) + dist(k, i) + eps_tri) {
          violations.push_back({Axiom::Triangle, static_cast<std::size_t>(j),
                                static_cast<std::size_t>(i), static_cast<std::size_t>(k)});
        }
      }
    }
  }

  MetricValidation result;
  if (violations.empty()) {
    result.space = FiniteMetricSpace(dist, std::move(labels));
  }
  result.violations = std::move(violations);
  return result;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(const Eigen::MatrixXd& dist,
                                                 std::vector<std::string> labels,
                                                 double eps_tri) {
  auto checked = validate_metric(dist, eps_tri, std::move(labels));
  if (!checked.ok()) throw MetricError(std::move(checked.violations));
  return std::move(*checked.space);
}

Eigen::MatrixXd FiniteMetricSpace::power_matrix(double p) const {
  const auto n = dist_.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (j == i) {
        out(j, i) = 0.0;
      } else {
        out(j, i) = p == 0.0 ? 1.0 : std::pow(dist_(j, i), p);
      }
    }
  }
  return out;
}

FiniteMetricSpace metric_transform(const FiniteMetricSpace& space, double p) {
  if (!(p >= 0.0 && p <= 2.0)) {
    throw std::invalid_argument("metric transform exponent must lie in [0, 2]");
  }
  return FiniteMetricSpace::from_matrix(space.power_matrix(p / 2.0), space.labels());
}

FiniteMetricSpace cycle_metric(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle metric needs n >= 3");
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd dist(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i < size; ++i) {
      const auto gap = std::abs(j - i);
      dist(j, i) = static_cast<double>(std::min(gap, size - gap));
    }
  }
  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = "c" + std::to_string(k);
  return FiniteMetricSpace::from_matrix(dist, std::move(labels));
}

FiniteMetricSpace random_ultrametric(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random ultrametric needs n >= 2");
  Rng rng(seed);

  std::vector<double> heights(n - 1);
  for (auto& h : heights) h = rng.uniform(1.0, 1.5);
  std::sort(heights.begin(), heights.end());
  // Ties are vanishingly rare but would merge two levels; separate them.
  for (std::size_t k = 1; k < heights.size(); ++k) {
    if (heights[k] <= heights[k - 1]) heights[k] = std::nextafter(heights[k - 1], 2.0);
  }

  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(size, size);
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t k = 0; k < n; ++k) clusters[k] = {k};

  for (double h : heights) {
    const std::size_t a = rng.index(clusters.size());
    std::size_t b = rng.index(clusters.size() - 1);
    if (b >= a) ++b;
    for (auto pa : clusters[a]) {
      for (auto pb : clusters[b]) {
        dist(static_cast<Eigen::Index>(pa), static_cast<Eigen::Index>(pb)) = h;
        dist(static_cast<Eigen::Index>(pb), static_cast<Eigen::Index>(pa)) = h;
      }
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
  }

  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = "u" + std::to_string(k);
  return FiniteMetricSpace::from_matrix(dist, std::move(labels));
}

bool is_ultrametric(const FiniteMetricSpace& space, double eps) {
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (space.distance(x, z) > std::max(space.distance(x, y), space.distance(y, z)) + eps) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace polyeq
