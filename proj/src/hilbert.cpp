#include "polyeq/hilbert.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polyeq {

namespace {

void require_two(const LpPointSet& points) {
  if (points.p() != 2.0) throw std::invalid_argument("this operation needs exponent p = 2");
}

// Sum of |weight products * squared distances| over every pair of vertices;
// the scale against which cancellation in gamma_2 is measured.
double gap_magnitude(const SignedSimplex& simplex, const Eigen::MatrixXd& kernel) {
  std::vector<Vertex> all = simplex.xs();
  all.insert(all.end(), simplex.ys().begin(), simplex.ys().end());
  double sum = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      sum += std::abs(all[a].weight * all[b].weight) *
             kernel(static_cast<Eigen::Index>(all[a].point), static_cast<Eigen::Index>(all[b].point));
    }
  }
  return sum;
}

}  // namespace

Gamma2Identity gamma2_identity(const SignedSimplex& simplex, const LpPointSet& points) {
  require_two(points);
  return {balance_defect(simplex, points).squaredNorm(), gamma_p_lp(simplex, points).value};
}

TwoPolygonalClass classify_2_polygonal(const SignedSimplex& simplex, const LpPointSet& points,
                                       double eps) {
  require_two(points);
  const Eigen::MatrixXd kernel = lp_power_matrix(points);
  TwoPolygonalClass out;
  out.gap = simplex_gap(simplex, kernel);
  out.defect_norm = balance_defect(simplex, points).norm();
  const double rounding =
      64.0 * std::numeric_limits<double>::epsilon() * gap_magnitude(simplex, kernel);
  out.gap_tolerance = std::max(eps * eps, rounding);
  out.gap_zero = std::abs(out.gap) <= out.gap_tolerance;
  out.balanced = out.defect_norm <= eps;
  return out;
}

AffineReport affine_dependence(const LpPointSet& points, double rel_threshold) {
  AffineReport report;
  const auto count = static_cast<Eigen::Index>(points.size());
  if (count < 2) return report;
  const auto& c = points.coords();
  const Eigen::Index n = count - 1;

  Eigen::MatrixXd diffs(c.cols(), n);
  for (Eigen::Index k = 0; k < n; ++k) diffs.col(k) = (c.row(k + 1) - c.row(0)).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = rel_threshold * (sigma.size() > 0 ? sigma(0) : 0.0);
  for (Eigen::Index k = 0; k < sigma.size(); ++k) report.rank += sigma(k) > cutoff;
  report.dependent = static_cast<Eigen::Index>(report.rank) < n;
  if (!report.dependent) return report;

  // Full V orders columns by decreasing singular value, with the columns past
  // min(rows, cols) spanning the exact null space; the last one is smallest.
  const Eigen::VectorXd tail = svd.matrixV().col(n - 1);
  Eigen::VectorXd dep(count);
  dep(0) = -tail.sum();
  dep.tail(n) = tail;
  dep /= dep.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < count; ++k) {
    const double nearest = std::round(dep(k));
    if (std::abs(dep(k) - nearest) < 1e-12) dep(k) = nearest;
  }
  for (Eigen::Index k = 0; k < count; ++k) {
    if (dep(k) != 0.0) {
      if (dep(k) < 0.0) dep = -dep;
      break;
    }
  }
  report.dependency = std::move(dep);
  return report;
}

SignedSimplex balanced_simplex_from_dependency(const LpPointSet& points, const Eigen::VectorXd& c,
                                               double eps) {
  if (static_cast<std::size_t>(c.size()) != points.size()) {
    throw std::invalid_argument("dependency length does not match the point set");
  }
  const double scale = c.cwiseAbs().maxCoeff();
  if (!(scale > eps)) throw std::invalid_argument("dependency vector is zero");
  if (std::abs(c.sum()) > eps * std::max(1.0, c.cwiseAbs().sum())) {
    throw std::invalid_argument("dependency coefficients do not sum to zero");
  }
  const Eigen::VectorXd combo = points.coords().transpose() * c;
  const double coord_scale = std::max(1.0, points.coords().cwiseAbs().maxCoeff());
  if (combo.size() > 0 && combo.cwiseAbs().maxCoeff() > eps * coord_scale * std::max(1.0, scale)) {
    throw std::invalid_argument("dependency does not annihilate the points");
  }
  return from_alpha(c, eps);
}

Hilbert2Strictness strict_2_negtype(const LpPointSet& points, const EigenTolerance& tol,
                                    double rel_threshold) {
  require_two(points);
  Hilbert2Strictness out;
  out.affine = affine_dependence(points, rel_threshold);
  out.strict = !out.affine.dependent;
  out.eigen = strict_negative_type_certificate(lp_power_matrix(points), 2.0, tol);
  out.agrees = out.strict == out.eigen.holds;
  return out;
}

}  // namespace polyeq
