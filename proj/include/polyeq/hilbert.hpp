#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "polyeq/lp.hpp"
#include "polyeq/negtype.hpp"
#include "polyeq/simplex.hpp"

namespace polyeq {

struct Gamma2Identity {
  double lhs = 0.0;  ///< ||sum m_j x_j - sum n_i y_i||^2
  double gap = 0.0;  ///< gamma_2(D) from pairwise squared distances
};

/// Both sides of the inner-product identity. Throws unless points.p() == 2.
Gamma2Identity gamma2_identity(const SignedSimplex& simplex, const LpPointSet& points);

struct TwoPolygonalClass {
  bool gap_zero = false;
  bool balanced = false;
  double gap = 0.0;
  double defect_norm = 0.0;  ///< Euclidean norm of the balance defect
  double gap_tolerance = 0.0;
};

/// balanced: ||defect||_2 <= eps. gap_zero: |gamma_2| <= max(eps^2, rounding
/// floor of the pairwise sum), so the two verdicts agree up to cancellation.
TwoPolygonalClass classify_2_polygonal(const SignedSimplex& simplex, const LpPointSet& points,
                                       double eps = kDefaultCoordinateTol);

struct AffineReport {
  std::size_t rank = 0;
  bool dependent = false;
  std::optional<Eigen::VectorXd> dependency;  ///< c with sum c_k z_k = 0, sum c_k = 0
};

/// Rank of the difference matrix {z_k - z_0} from an SVD, counting singular
/// values above rel_threshold * the largest. A dependency comes from the right
/// singular vector of the smallest singular value, extended by
/// c_0 = -(c_1 + ... + c_n) and scaled to max |c_k| = 1, first non-zero positive.
AffineReport affine_dependence(const LpPointSet& points, double rel_threshold = 1e-10);

/// x-side: points with c_k > eps at weight c_k; y-side: points with c_k < -eps
/// at weight -c_k. Throws std::invalid_argument unless c is a non-zero affine
/// dependency within eps.
SignedSimplex balanced_simplex_from_dependency(const LpPointSet& points, const Eigen::VectorXd& c,
                                               double eps = kDefaultCoordinateTol);

struct Hilbert2Strictness {
  bool strict = false;  ///< affinely independent
  AffineReport affine;
  EigenCertificate eigen;  ///< strictness of the Euclidean distances at p = 2
  bool agrees = false;
};

/// Throws unless points.p() == 2.
Hilbert2Strictness strict_2_negtype(const LpPointSet& points, const EigenTolerance& tol = {},
                                    double rel_threshold = 1e-10);

}  // namespace polyeq
