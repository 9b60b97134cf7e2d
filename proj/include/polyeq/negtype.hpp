#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyeq/metric.hpp"

namespace polyeq {

/// Columns spanning the zero-sum hyperplane.
enum class ZeroSumBasis {
  Difference,    ///< e_k - e_{k+1}
  MeanCentered,  ///< e_k - (1/n) 1
};

Eigen::MatrixXd zero_sum_basis(std::size_t n, ZeroSumBasis kind = ZeroSumBasis::Difference);

/// Tolerance for eigenvalue sign tests. Unless `absolute` is set, the
/// effective value is relative * max(1, largest |eigenvalue| of the projected
/// form), since entries enter as d^p and absolute thresholds drift with scale.
struct EigenTolerance {
  double relative = 1e-8;
  std::optional<double> absolute;

  double resolve(double scale) const;
};

/// The quadratic form alpha -> <K alpha, alpha> restricted to the zero-sum
/// hyperplane through a basis B: projected = sym(B^T K B).
struct NegTypeForm {
  double p = 0.0;
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd projected;
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< columns match eigenvalues
  double eps_eig = 0.0;

  /// Largest eigenvalue; -infinity for a one-point space (empty hyperplane).
  double lambda_max() const;
};

/// `kernel` holds d(z_j,z_i)^p (or any stand-in such as ||z_j - z_i||_p^p).
NegTypeForm build_form(const Eigen::MatrixXd& kernel, double p, const EigenTolerance& tol = {},
                       ZeroSumBasis basis = ZeroSumBasis::Difference);

/// Outcome of one eigenvalue sign test.
struct EigenCertificate {
  double p = 0.0;
  bool holds = false;
  double lambda_max = 0.0;  ///< -infinity when the hyperplane is {0}
  double eps_eig = 0.0;
  std::size_t dimension = 0;  ///< dimension of the zero-sum hyperplane
};

/// p-negative type: lambda_max(projected) <= eps_eig.
EigenCertificate has_negative_type(const FiniteMetricSpace& space, double p,
                                   const EigenTolerance& tol = {},
                                   ZeroSumBasis basis = ZeroSumBasis::Difference);

/// Strict p-negative type: lambda_max(projected) <= -eps_eig.
EigenCertificate has_strict_negative_type(const FiniteMetricSpace& space, double p,
                                          const EigenTolerance& tol = {},
                                          ZeroSumBasis basis = ZeroSumBasis::Difference);

/// Kernel-level variants for callers that build their own d^p matrix.
EigenCertificate negative_type_certificate(const Eigen::MatrixXd& kernel, double p,
                                           const EigenTolerance& tol = {},
                                           ZeroSumBasis basis = ZeroSumBasis::Difference);
EigenCertificate strict_negative_type_certificate(const Eigen::MatrixXd& kernel, double p,
                                                  const EigenTolerance& tol = {},
                                                  ZeroSumBasis basis = ZeroSumBasis::Difference);

struct RoundnessOptions {
  double p_max = 16.0;
  double tol_p = 1e-6;
  EigenTolerance eig;
  ZeroSumBasis basis = ZeroSumBasis::Difference;
};

struct RoundnessReport {
  double roundness = 0.0;
  bool at_cap = false;
  int iterations = 0;
  double p_max = 0.0;
  double tol_p = 0.0;
  EigenCertificate certificate_low;
  std::optional<EigenCertificate> certificate_high;  ///< absent when at_cap
};

/// Bisection on [0, p_max] with has_negative_type as the monotone predicate.
/// `roundness` is the largest p certified to pass. When the predicate holds at
/// p_max the report is flagged at_cap. Throws std::invalid_argument if the
/// predicate fails at p = 0 or p_max <= 0.
RoundnessReport generalized_roundness(const FiniteMetricSpace& space,
                                      const RoundnessOptions& options = {});

/// A zero-sum weight vector at which the p-form vanishes (up to tolerance).
struct EqualityWitness {
  Eigen::VectorXd alpha;  ///< max |alpha_k| = 1, first non-zero entry positive
  double p = 0.0;
  double residual = 0.0;   ///< sum_{j,i} alpha_j alpha_i d^p
  double tolerance = 0.0;  ///< bound on |residual| implied by eps_eig
};

/// Near-null directions of the projected form, mapped back to weight vectors.
/// Empty exactly when the space has strict p-negative type. Throws
/// std::invalid_argument when the space does not have p-negative type.
std::vector<EqualityWitness> equality_witnesses(const FiniteMetricSpace& space, double p,
                                                const EigenTolerance& tol = {},
                                                ZeroSumBasis basis = ZeroSumBasis::Difference);
std::vector<EqualityWitness> equality_witnesses_for_kernel(
    const Eigen::MatrixXd& kernel, double p, const EigenTolerance& tol = {},
    ZeroSumBasis basis = ZeroSumBasis::Difference);

/// Thrown when an operation's mathematical precondition is not met.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ObstructionReport {
  bool obstructed = false;
  double p = 0.0;                     ///< exponent of the target's equality
  double q = 0.0;                     ///< exponent at which the source is strict
  EigenCertificate source_strict_q;   ///< precondition
  EigenCertificate source_strict_p;   ///< direct check (implied by the q certificate)
  double witness_residual = 0.0;
  double witness_tolerance = 0.0;
  std::string verdict;
};

/// A source with strict q-negative type has strict p-negative type for every
/// p <= q, so it cannot be isometric to any space admitting the non-trivial
/// p-polygonal equality carried by `witness`. Throws PreconditionError when
/// q < witness.p, when the witness is trivial or fails its own tolerance, or
/// when the source is not strict at q.
ObstructionReport embedding_obstruction(const FiniteMetricSpace& source,
                                        const EqualityWitness& witness, double q,
                                        const EigenTolerance& tol = {});

}  // namespace polyeq
