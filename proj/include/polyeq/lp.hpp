#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyeq/metric.hpp"
#include "polyeq/negtype.hpp"
#include "polyeq/simplex.hpp"

namespace polyeq {

inline constexpr double kDefaultCoordinateTol = 1e-9;

/// Finitely many points of l_p^(M): row k of `coords` is point z_k and column
/// w is the coordinate z_k(w). Rows are pairwise distinct.
class LpPointSet {
 public:
  /// Throws std::invalid_argument for p <= 0, non-finite input, an empty set,
  /// or two rows that agree within eps_c in every coordinate.
  LpPointSet(double p, Eigen::MatrixXd coords, double eps_c = kDefaultCoordinateTol);

  double p() const { return p_; }
  const Eigen::MatrixXd& coords() const { return coords_; }
  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(coords_.cols()); }
  Eigen::VectorXd point(std::size_t k) const {
    return coords_.row(static_cast<Eigen::Index>(k)).transpose();
  }

 private:
  double p_;
  Eigen::MatrixXd coords_;
};

/// sum_w |u(w)|^p.
double lp_power_norm(const Eigen::VectorXd& u, double p);

/// Matrix of ||z_j - z_i||_p^p. This is the kernel every gap and negative-type
/// test in this layer uses, for all p > 0.
Eigen::MatrixXd lp_power_matrix(const LpPointSet& points);

/// The induced metric: ||.||_p for p >= 1 and ||.||_p^p for 0 < p < 1.
FiniteMetricSpace lp_distance_matrix(const LpPointSet& points);

/// Gap with ||.||_p^p terms.
GapValue gamma_p_lp(const SignedSimplex& simplex, const LpPointSet& points);
/// Same, but throws if `p` differs from the point set's exponent.
GapValue gamma_p_lp(const SignedSimplex& simplex, const LpPointSet& points, double p);

enum class ClusterMode {
  Chain,  ///< sort, start a new cluster where consecutive values differ by > eps_c
  Exact,  ///< bitwise-equal values only (integer or dyadic input)
};

struct ClusterOptions {
  double eps_c = kDefaultCoordinateTol;
  ClusterMode mode = ClusterMode::Chain;
  double eps_w = kDefaultWeightTol;
};

/// Cluster id for each value, ids assigned in increasing value order.
std::vector<std::size_t> cluster_values(const std::vector<double>& values,
                                        const ClusterOptions& options = {});

struct ValueCluster {
  double value = 0.0;  ///< smallest member
  double m = 0.0;      ///< x-side weight landing in the cluster
  double n = 0.0;      ///< y-side weight landing in the cluster
};

/// The scalar simplex D(w) = [x_j(w)(m_j); y_i(w)(n_i)] at one coordinate.
struct CoordinateReport {
  std::size_t omega = 0;
  std::vector<ValueCluster> clusters;
  bool degenerate = false;  ///< m(v) = n(v) for every cluster v
  bool balanced = false;    ///< sum m_j x_j(w) = sum n_i y_i(w)
};

struct VdReport {
  bool virtually_degenerate = false;
  std::vector<CoordinateReport> coordinates;
};

/// Per-coordinate degeneracy of a non-degenerate simplex. Throws
/// PreconditionError for a degenerate simplex.
VdReport is_virtually_degenerate(const SignedSimplex& simplex, const LpPointSet& points,
                                 const ClusterOptions& options = {});

/// ||sum m_j x_j - sum n_i y_i||_inf.
Eigen::VectorXd balance_defect(const SignedSimplex& simplex, const LpPointSet& points);
bool is_balanced(const SignedSimplex& simplex, const LpPointSet& points,
                 double eps = kDefaultCoordinateTol);

/// Basis of all weightings alpha with sum_{k : z_k(w) in v} alpha_k = 0 for
/// every coordinate w and value cluster v. Columns are in reduced echelon form,
/// each scaled to max |entry| = 1.
struct VdKernel {
  Eigen::MatrixXd basis;  ///< N x dim
  std::size_t constraint_count = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(basis.cols()); }
};

VdKernel vd_kernel(const LpPointSet& points, const ClusterOptions& options = {});

struct LpStrictness {
  bool strict = false;  ///< no virtually degenerate simplex exists
  std::size_t kernel_dimension = 0;
  EigenCertificate eigen;  ///< independent eigenvalue check on ||.||_p^p
  bool agrees = false;
};

/// Strict p-negative type for 0 < p < 2 via the virtual-degeneracy kernel,
/// cross-checked by the eigenvalue test. Throws std::invalid_argument otherwise.
LpStrictness strict_p_negtype_lp(const LpPointSet& points, const ClusterOptions& options = {},
                                 const EigenTolerance& tol = {});

/// Supports are the entries with |.| > eps. Throws for a zero vector.
bool disjoint_support_check(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double eps = 0.0);

/// ||u+v||_p^p + ||u-v||_p^p - 2(||u||_p^p + ||v||_p^p).
double parallelogram_equality_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                       double p);

struct ElsnerReport {
  bool equality_holds = false;           ///< gap of [x_j(1); y_i(1)] vanishes
  bool per_coordinate_identical = false;  ///< sorted coordinate multisets agree
  double residual = 0.0;                  ///< the gap itself
  double tolerance = 0.0;
  bool consistent = true;  ///< the two verdicts agree (required for 0 < p < 2)
};

/// Families are lists of equal-length vectors, N vectors each. Throws
/// PreconditionError if [x_j(1); y_i(1)] is degenerate.
ElsnerReport elsner_identity_check(const std::vector<Eigen::VectorXd>& xs,
                                   const std::vector<Eigen::VectorXd>& ys, double p,
                                   double eps = kDefaultCoordinateTol);

/// Hypothesis check for building a (3,3)-simplex from two vectors. When every
/// hypothesis holds, kappa satisfies kappa * u[v] = v[u].
struct PairHypotheses {
  bool independent = false;
  bool supports_intersect = false;
  bool restrictions_dependent = false;
  std::vector<std::size_t> shared_support;
  std::optional<double> kappa;

  bool all() const { return independent && supports_intersect && restrictions_dependent; }
  std::string first_failure() const;
};

/// Supports use |.| > support_eps; the restriction comparison is relative:
/// |kappa u(w) - v(w)| <= eps * max(|kappa u(w)|, |v(w)|).
PairHypotheses check_pair_hypotheses(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                     double eps = kDefaultCoordinateTol, double support_eps = 0.0);

struct VdsPair {
  double kappa = 0.0;
  LpPointSet points;  ///< x1, x2, x3, y1, y2, y3
  SignedSimplex simplex;
  VdReport report;
};

/// x1 = kappa u - v, x2 = -kappa u, x3 = v; y1 = v - kappa u, y2 = kappa u,
/// y3 = -v, all weight 1. Throws PreconditionError naming the failed
/// hypothesis, or std::runtime_error if the result is not virtually degenerate.
VdsPair construct_vds_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double p = 1.0,
                           double eps = kDefaultCoordinateTol, const ClusterOptions& cluster = {});

/// First k primes.
std::vector<std::size_t> first_primes(std::size_t k);

struct BasisPairReport {
  std::size_t first = 0;
  std::size_t second = 0;
  PairHypotheses hypotheses;  ///< shared_support holds 1-based coordinates
  bool kappa_is_one = false;
  bool simplex_virtually_degenerate = false;  ///< exact clustering on the (3,3)-simplex
};

struct InfVdsBasis {
  LpPointSet points;  ///< k x L, column l-1 holds coordinate l
  std::size_t truncation = 0;
  std::vector<BasisPairReport> pairs;
  bool all_pairs_intersect = false;
  bool all_pairs_satisfy_hypotheses = false;
};

/// x_n(l) = 2^{-l} when the n-th prime divides l (1 <= l <= L), else 0.
/// Throws std::invalid_argument when L < 6 or some pairwise product of the
/// first k primes exceeds L.
InfVdsBasis infvds_basis(std::size_t k, std::size_t dims, double p = 1.0);

/// Variant x_n(l) = p_n^{-l} when p_n divides l. Generator only.
LpPointSet infvds_variant_basis(std::size_t k, std::size_t dims, double p = 1.0);

}  // namespace polyeq
