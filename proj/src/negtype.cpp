#include "polyeq/negtype.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polyeq {

namespace {

constexpr double kChop = 1e-12;

void normalize_sign_and_scale(Eigen::VectorXd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  v /= scale;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) < kChop) v(k) = 0.0;
  }
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) != 0.0) {
      if (v(k) < 0.0) v = -v;
      break;
    }
  }
}

}  // namespace

Eigen::MatrixXd zero_sum_basis(std::size_t n, ZeroSumBasis kind) {
  if (n == 0) throw std::invalid_argument("zero-sum basis needs n >= 1");
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(rows, rows - 1);
  for (Eigen::Index k = 0; k + 1 < rows; ++k) {
    if (kind == ZeroSumBasis::Difference) {
      basis(k, k) = 1.0;
      basis(k + 1, k) = -1.0;
    } else {
      basis.col(k).setConstant(-1.0 / static_cast<double>(n));
      basis(k, k) += 1.0;
    }
  }
  return basis;
}

double EigenTolerance::resolve(double scale) const {
  if (absolute) return *absolute;
  return relative * std::max(1.0, scale);
}

double NegTypeForm::lambda_max() const {
  if (eigenvalues.size() == 0) return -std::numeric_limits<double>::infinity();
  return eigenvalues(eigenvalues.size() - 1);
}

NegTypeForm build_form(const Eigen::MatrixXd& kernel, double p, const EigenTolerance& tol,
                       ZeroSumBasis basis) {
  if (kernel.rows() == 0 || kernel.rows() != kernel.cols()) {
    throw std::invalid_argument("form kernel must be a non-empty square matrix");
  }
  if (!kernel.allFinite()) {
    throw std::runtime_error("distance powers overflow at p = " + std::to_string(p));
  }
  NegTypeForm form;
  form.p = p;
  form.matrix = kernel;
  form.basis = zero_sum_basis(static_cast<std::size_t>(kernel.rows()), basis);
  if (kernel.rows() == 1) {
    form.projected.resize(0, 0);
    form.eps_eig = tol.resolve(0.0);
    return form;
  }
  const Eigen::MatrixXd raw = form.basis.transpose() * kernel * form.basis;
  form.projected = 0.5 * (raw + raw.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form.projected);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  form.eigenvalues = solver.eigenvalues();
  form.eigenvectors = solver.eigenvectors();
  form.eps_eig = tol.resolve(form.eigenvalues.cwiseAbs().maxCoeff());
  return form;
}

EigenCertificate negative_type_certificate(const Eigen::MatrixXd& kernel, double p,
                                           const EigenTolerance& tol, ZeroSumBasis basis) {
  const auto form = build_form(kernel, p, tol, basis);
  const double top = form.lambda_max();
  return {p, top <= form.eps_eig, top, form.eps_eig,
          static_cast<std::size_t>(form.projected.rows())};
}

EigenCertificate strict_negative_type_certificate(const Eigen::MatrixXd& kernel, double p,
                                                  const EigenTolerance& tol, ZeroSumBasis basis) {
  const auto form = build_form(kernel, p, tol, basis);
  const double top = form.lambda_max();
  return {p, top <= -form.eps_eig, top, form.eps_eig,
          static_cast<std::size_t>(form.projected.rows())};
}

EigenCertificate has_negative_type(const FiniteMetricSpace& space, double p,
                                   const EigenTolerance& tol, ZeroSumBasis basis) {
  if (!(p >= 0.0)) throw std::invalid_argument("negative type exponent must be non-negative");
  return negative_type_certificate(space.power_matrix(p), p, tol, basis);
}

EigenCertificate has_strict_negative_type(const FiniteMetricSpace& space, double p,
                                          const EigenTolerance& tol, ZeroSumBasis basis) {
  if (!(p >= 0.0)) throw std::invalid_argument("negative type exponent must be non-negative");
  return strict_negative_type_certificate(space.power_matrix(p), p, tol, basis);
}

RoundnessReport generalized_roundness(const FiniteMetricSpace& space,
                                      const RoundnessOptions& options) {
  if (!(options.p_max > 0.0)) throw std::invalid_argument("p_max must be positive");
  if (!(options.tol_p > 0.0)) throw std::invalid_argument("tol_p must be positive");

  RoundnessReport report;
  report.p_max = options.p_max;
  report.tol_p = options.tol_p;

  auto low = has_negative_type(space, 0.0, options.eig, options.basis);
  if (!low.holds) throw std::invalid_argument("negative type fails at p = 0; input is not a metric");

  auto high = has_negative_type(space, options.p_max, options.eig, options.basis);
  if (high.holds) {
    report.roundness = options.p_max;
    report.at_cap = true;
    report.certificate_low = high;
    return report;
  }

  while (high.p - low.p > options.tol_p) {
    const double mid = 0.5 * (low.p + high.p);
    auto cert = has_negative_type(space, mid, options.eig, options.basis);
    ++report.iterations;
    if (cert.holds) {
      low = cert;
    } else {
      high = cert;
    }
  }
  report.roundness = low.p;
  report.certificate_low = low;
  report.certificate_high = high;
  return report;
}

std::vector<EqualityWitness> equality_witnesses_for_kernel(const Eigen::MatrixXd& kernel,
                                                           double p, const EigenTolerance& tol,
                                                           ZeroSumBasis basis) {
  const auto form = build_form(kernel, p, tol, basis);
  if (form.lambda_max() > form.eps_eig) {
    throw PreconditionError("no p-negative type at this exponent; witnesses are undefined");
  }
  const Eigen::MatrixXd abs_kernel = kernel.cwiseAbs();
  std::vector<EqualityWitness> out;
  for (Eigen::Index k = 0; k < form.eigenvalues.size(); ++k) {
    if (std::abs(form.eigenvalues(k)) > form.eps_eig) continue;
    Eigen::VectorXd alpha = form.basis * form.eigenvectors.col(k);
    const double scale = alpha.cwiseAbs().maxCoeff();
    normalize_sign_and_scale(alpha);
    EqualityWitness w;
    w.p = p;
    w.residual = alpha.dot(kernel * alpha);
    const Eigen::VectorXd mags = alpha.cwiseAbs();
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() *
                            mags.dot(abs_kernel * mags);
    w.tolerance = form.eps_eig / (scale * scale) + rounding;
    w.alpha = std::move(alpha);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<EqualityWitness> equality_witnesses(const FiniteMetricSpace& space, double p,
                                                const EigenTolerance& tol, ZeroSumBasis basis) {
  if (!(p >= 0.0)) throw std::invalid_argument("witness exponent must be non-negative");
  return equality_witnesses_for_kernel(space.power_matrix(p), p, tol, basis);
}

ObstructionReport embedding_obstruction(const FiniteMetricSpace& source,
                                        const EqualityWitness& witness, double q,
                                        const EigenTolerance& tol) {
  if (q < witness.p) throw PreconditionError("obstruction needs q >= the witness exponent");
  Eigen::Index nonzero = 0;
  for (Eigen::Index k = 0; k < witness.alpha.size(); ++k) nonzero += witness.alpha(k) != 0.0;
  if (nonzero < 2) throw PreconditionError("witness is trivial");
  if (std::abs(witness.residual) > witness.tolerance) {
    throw PreconditionError("witness residual exceeds its tolerance");
  }

  ObstructionReport report;
  report.p = witness.p;
  report.q = q;
  report.witness_residual = witness.residual;
  report.witness_tolerance = witness.tolerance;
  report.source_strict_q = has_strict_negative_type(source, q, tol);
  if (!report.source_strict_q.holds) {
    throw PreconditionError("source does not have strict q-negative type");
  }
  report.source_strict_p = has_strict_negative_type(source, witness.p, tol);
  report.obstructed = report.source_strict_p.holds;

  std::ostringstream verdict;
  if (report.obstructed) {
    verdict << "source has strict " << q << "-negative type, hence strict " << witness.p
            << "-negative type; it is not isometric to any subspace admitting this non-trivial "
            << witness.p << "-polygonal equality";
  } else {
    verdict << "inconclusive: strictness at " << witness.p
            << " was not certified numerically despite strictness at " << q;
  }
  report.verdict = verdict.str();
  return report;
}

}  // namespace polyeq
