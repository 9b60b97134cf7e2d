#include "polyeq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace polyeq {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kChop = 1e-12;

bool rows_coincide(const Eigen::MatrixXd& coords, Eigen::Index a, Eigen::Index b, double eps) {
  return (coords.row(a) - coords.row(b)).cwiseAbs().maxCoeff() <= eps;
}

// Reduced row echelon form of the rows of `rows` (d x N), in place. Rows stay
// independent, so every row ends with a pivot.
void reduce_rows(Eigen::MatrixXd& rows) {
  const Eigen::Index d = rows.rows();
  const Eigen::Index n = rows.cols();
  Eigen::Index lead = 0;
  for (Eigen::Index col = 0; col < n && lead < d; ++col) {
    Eigen::Index best = lead;
    for (Eigen::Index r = lead + 1; r < d; ++r) {
      if (std::abs(rows(r, col)) > std::abs(rows(best, col))) best = r;
    }
    if (std::abs(rows(best, col)) < kRankThreshold) continue;
    rows.row(lead).swap(rows.row(best));
    rows.row(lead) /= rows(lead, col);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (r != lead) rows.row(r) -= rows(r, col) * rows.row(lead);
    }
    ++lead;
  }
}

void canonicalize(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) < kChop) v(k) = 0.0;
  }
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  v /= scale;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double nearest = std::round(v(k));
    if (std::abs(v(k) - nearest) < kChop) v(k) = nearest;
  }
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) != 0.0) {
      if (v(k) < 0.0) v = -v;
      break;
    }
  }
}

std::vector<std::size_t> support(const Eigen::VectorXd& u, double eps) {
  std::vector<std::size_t> out;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (std::abs(u(k)) > eps) out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

bool linearly_independent(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::MatrixXd pair(u.size(), 2);
  pair.col(0) = u;
  pair.col(1) = v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pair);
  const auto& sigma = svd.singularValues();
  return sigma(0) > 0.0 && sigma(1) > kRankThreshold * sigma(0);
}

}  // namespace

LpPointSet::LpPointSet(double p, Eigen::MatrixXd coords, double eps_c)
    : p_(p), coords_(std::move(coords)) {
  if (!(p_ > 0.0) || !std::isfinite(p_)) throw std::invalid_argument("exponent p must be in (0, inf)");
  if (coords_.rows() == 0) throw std::invalid_argument("point set is empty");
  if (!coords_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
  for (Eigen::Index a = 0; a < coords_.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < coords_.rows(); ++b) {
      if (rows_coincide(coords_, a, b, eps_c)) {
        throw std::invalid_argument("points " + std::to_string(a) + " and " + std::to_string(b) +
                                    " coincide");
      }
    }
  }
}

double lp_power_norm(const Eigen::VectorXd& u, double p) {
  return u.cwiseAbs().array().pow(p).sum();
}

Eigen::MatrixXd lp_power_matrix(const LpPointSet& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto& c = points.coords();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double value = (c.row(j) - c.row(i)).cwiseAbs().array().pow(points.p()).sum();
      out(j, i) = value;
      out(i, j) = value;
    }
  }
  return out;
}

FiniteMetricSpace lp_distance_matrix(const LpPointSet& points) {
  Eigen::MatrixXd dist = lp_power_matrix(points);
  if (points.p() >= 1.0) dist = dist.array().pow(1.0 / points.p()).matrix();
  std::vector<std::string> labels(points.size());
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = "z" + std::to_string(k);
  return FiniteMetricSpace::from_matrix(dist, std::move(labels));
}

GapValue gamma_p_lp(const SignedSimplex& simplex, const LpPointSet& points) {
  if (simplex.universe_size() != points.size()) {
    throw std::invalid_argument("simplex universe does not match the point set");
  }
  return {points.p(), simplex_gap(simplex, lp_power_matrix(points))};
}

GapValue gamma_p_lp(const SignedSimplex& simplex, const LpPointSet& points, double p) {
  if (p != points.p()) {
    throw std::invalid_argument("gap exponent " + std::to_string(p) +
                                " does not match the point set exponent " +
                                std::to_string(points.p()));
  }
  return gamma_p_lp(simplex, points);
}

std::vector<std::size_t> cluster_values(const std::vector<double>& values,
                                        const ClusterOptions& options) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> ids(values.size());
  std::size_t id = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0) {
      const double prev = values[order[k - 1]];
      const double cur = values[order[k]];
      const bool split = options.mode == ClusterMode::Exact ? cur != prev
                                                             : cur - prev > options.eps_c;
      if (split) ++id;
    }
    ids[order[k]] = id;
  }
  return ids;
}

VdReport is_virtually_degenerate(const SignedSimplex& simplex, const LpPointSet& points,
                                 const ClusterOptions& options) {
  if (simplex.universe_size() != points.size()) {
    throw std::invalid_argument("simplex universe does not match the point set");
  }
  if (is_degenerate(simplex, options.eps_w)) {
    throw PreconditionError("virtual degeneracy is defined for non-degenerate simplices");
  }
  const auto& c = points.coords();
  const auto& xs = simplex.xs();
  const auto& ys = simplex.ys();

  VdReport report;
  report.virtually_degenerate = true;
  for (Eigen::Index w = 0; w < c.cols(); ++w) {
    std::vector<double> values;
    values.reserve(xs.size() + ys.size());
    for (const auto& v : xs) values.push_back(c(static_cast<Eigen::Index>(v.point), w));
    for (const auto& v : ys) values.push_back(c(static_cast<Eigen::Index>(v.point), w));
    const auto ids = cluster_values(values, options);

    CoordinateReport coord;
    coord.omega = static_cast<std::size_t>(w);
    const std::size_t count = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
    coord.clusters.assign(count, ValueCluster{std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double weighted = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      auto& cluster = coord.clusters[ids[k]];
      cluster.value = std::min(cluster.value, values[k]);
      if (k < xs.size()) {
        cluster.m += xs[k].weight;
        weighted += xs[k].weight * values[k];
      } else {
        cluster.n += ys[k - xs.size()].weight;
        weighted -= ys[k - xs.size()].weight * values[k];
      }
    }
    coord.degenerate = std::all_of(coord.clusters.begin(), coord.clusters.end(),
                                   [&](const ValueCluster& v) {
                                     return std::abs(v.m - v.n) <= options.eps_w;
                                   });
    coord.balanced = std::abs(weighted) <= options.eps_c;
    report.virtually_degenerate = report.virtually_degenerate && coord.degenerate;
    report.coordinates.push_back(std::move(coord));
  }
  return report;
}

Eigen::VectorXd balance_defect(const SignedSimplex& simplex, const LpPointSet& points) {
  if (simplex.universe_size() != points.size()) {
    throw std::invalid_argument("simplex universe does not match the point set");
  }
  Eigen::VectorXd defect = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points.dims()));
  for (const auto& v : simplex.xs()) defect += v.weight * points.point(v.point);
  for (const auto& v : simplex.ys()) defect -= v.weight * points.point(v.point);
  return defect;
}

bool is_balanced(const SignedSimplex& simplex, const LpPointSet& points, double eps) {
  const auto defect = balance_defect(simplex, points);
  return defect.size() == 0 || defect.cwiseAbs().maxCoeff() <= eps;
}

VdKernel vd_kernel(const LpPointSet& points, const ClusterOptions& options) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto& c = points.coords();

  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index w = 0; w < c.cols(); ++w) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = c(k, w);
    const auto ids = cluster_values(values, options);
    const std::size_t count = *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<Eigen::VectorXd> block(count, Eigen::VectorXd::Zero(n));
    for (Eigen::Index k = 0; k < n; ++k) block[ids[static_cast<std::size_t>(k)]](k) = 1.0;
    rows.insert(rows.end(), block.begin(), block.end());
  }

  VdKernel kernel;
  kernel.constraint_count = rows.size();
  Eigen::MatrixXd constraints(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    constraints.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  }

  Eigen::Index rank = 0;
  Eigen::MatrixXd null_space;
  if (constraints.rows() == 0) {
    null_space = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = kRankThreshold * sigma(0);
    for (Eigen::Index k = 0; k < sigma.size(); ++k) rank += sigma(k) > cutoff;
    null_space = svd.matrixV().rightCols(n - rank);
  }

  Eigen::MatrixXd echelon = null_space.transpose();
  reduce_rows(echelon);
  kernel.basis = echelon.transpose();
  for (Eigen::Index k = 0; k < kernel.basis.cols(); ++k) canonicalize(kernel.basis.col(k));
  return kernel;
}

LpStrictness strict_p_negtype_lp(const LpPointSet& points, const ClusterOptions& options,
                                 const EigenTolerance& tol) {
  if (!(points.p() > 0.0 && points.p() < 2.0)) {
    throw std::invalid_argument("the virtual-degeneracy criterion needs 0 < p < 2");
  }
  LpStrictness out;
  out.kernel_dimension = vd_kernel(points, options).dimension();
  out.strict = out.kernel_dimension == 0;
  out.eigen = strict_negative_type_certificate(lp_power_matrix(points), points.p(), tol);
  out.agrees = out.strict == out.eigen.holds;
  return out;
}

bool disjoint_support_check(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double eps) {
  if (u.size() != v.size()) throw std::invalid_argument("vectors differ in length");
  const auto su = support(u, eps);
  const auto sv = support(v, eps);
  if (su.empty() || sv.empty()) throw std::invalid_argument("support check needs non-zero vectors");
  std::vector<std::size_t> shared;
  std::set_intersection(su.begin(), su.end(), sv.begin(), sv.end(), std::back_inserter(shared));
  return shared.empty();
}

double parallelogram_equality_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                       double p) {
  if (u.size() != v.size()) throw std::invalid_argument("vectors differ in length");
  if (u.cwiseAbs().maxCoeff() == 0.0 || v.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("parallelogram residual needs non-zero vectors");
  }
  return lp_power_norm(u + v, p) + lp_power_norm(u - v, p) -
         2.0 * (lp_power_norm(u, p) + lp_power_norm(v, p));
}

ElsnerReport elsner_identity_check(const std::vector<Eigen::VectorXd>& xs,
                                   const std::vector<Eigen::VectorXd>& ys, double p, double eps) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::invalid_argument("families must be non-empty and of equal size");
  }
  const auto dims = xs.front().size();
  for (const auto* family : {&xs, &ys}) {
    for (const auto& v : *family) {
      if (v.size() != dims) throw std::invalid_argument("family vectors differ in length");
    }
  }

  // Merge coincident vectors into one universe point.
  std::vector<Eigen::VectorXd> universe;
  auto locate = [&](const Eigen::VectorXd& v) {
    for (std::size_t k = 0; k < universe.size(); ++k) {
      if ((universe[k] - v).cwiseAbs().maxCoeff() <= eps) return k;
    }
    universe.push_back(v);
    return universe.size() - 1;
  };
  std::vector<Vertex> xv;
  std::vector<Vertex> yv;
  for (const auto& v : xs) xv.push_back({locate(v), 1.0});
  for (const auto& v : ys) yv.push_back({locate(v), 1.0});
  const SignedSimplex simplex(universe.size(), xv, yv);
  if (is_degenerate(simplex)) {
    throw PreconditionError("the families are a permutation of each other; the simplex is degenerate");
  }

  Eigen::MatrixXd coords(static_cast<Eigen::Index>(universe.size()), dims);
  for (std::size_t k = 0; k < universe.size(); ++k) {
    coords.row(static_cast<Eigen::Index>(k)) = universe[k].transpose();
  }
  const LpPointSet points(p, coords, eps);
  const Eigen::MatrixXd kernel = lp_power_matrix(points);

  ElsnerReport report;
  report.residual = simplex_gap(simplex, kernel);
  double magnitude = 0.0;
  const std::size_t total = xv.size() + yv.size();
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      const auto pa = a < xv.size() ? xv[a].point : yv[a - xv.size()].point;
      const auto pb = b < xv.size() ? xv[b].point : yv[b - xv.size()].point;
      magnitude += kernel(static_cast<Eigen::Index>(pa), static_cast<Eigen::Index>(pb));
    }
  }
  report.tolerance = eps * std::max(1.0, magnitude);
  report.equality_holds = std::abs(report.residual) <= report.tolerance;

  report.per_coordinate_identical = true;
  for (Eigen::Index w = 0; w < dims && report.per_coordinate_identical; ++w) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& v : xs) a.push_back(v(w));
    for (const auto& v : ys) b.push_back(v(w));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::abs(a[k] - b[k]) > eps) {
        report.per_coordinate_identical = false;
        break;
      }
    }
  }
  report.consistent = report.equality_holds == report.per_coordinate_identical;
  return report;
}

std::string PairHypotheses::first_failure() const {
  if (!independent) return "u and v are linearly dependent";
  if (!supports_intersect) return "supports of u and v do not intersect";
  if (!restrictions_dependent) return "restrictions u[v] and v[u] are linearly independent";
  return "";
}

PairHypotheses check_pair_hypotheses(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                     double eps, double support_eps) {
  if (u.size() != v.size()) throw std::invalid_argument("vectors differ in length");
  PairHypotheses out;
  out.independent = linearly_independent(u, v);
  const auto su = support(u, support_eps);
  const auto sv = support(v, support_eps);
  std::set_intersection(su.begin(), su.end(), sv.begin(), sv.end(),
                        std::back_inserter(out.shared_support));
  out.supports_intersect = !out.shared_support.empty();
  if (out.supports_intersect) {
    const auto first = static_cast<Eigen::Index>(out.shared_support.front());
    const double kappa = v(first) / u(first);
    out.restrictions_dependent = std::all_of(
        out.shared_support.begin(), out.shared_support.end(), [&](std::size_t k) {
          const auto w = static_cast<Eigen::Index>(k);
          const double lhs = kappa * u(w);
          return std::abs(lhs - v(w)) <= eps * std::max(std::abs(lhs), std::abs(v(w)));
        });
    if (out.restrictions_dependent) out.kappa = kappa;
  }
  return out;
}

VdsPair construct_vds_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double p,
                           double eps, const ClusterOptions& cluster) {
  const auto hyp = check_pair_hypotheses(u, v, eps, eps);
  if (!hyp.all()) throw PreconditionError(hyp.first_failure());
  const double kappa = *hyp.kappa;

  Eigen::MatrixXd coords(6, u.size());
  coords.row(0) = (kappa * u - v).transpose();
  coords.row(1) = (-kappa * u).transpose();
  coords.row(2) = v.transpose();
  coords.row(3) = (v - kappa * u).transpose();
  coords.row(4) = (kappa * u).transpose();
  coords.row(5) = (-v).transpose();
  LpPointSet points(p, coords, 0.0);
  SignedSimplex simplex(6, {{0, 1.0}, {1, 1.0}, {2, 1.0}}, {{3, 1.0}, {4, 1.0}, {5, 1.0}});
  auto report = is_virtually_degenerate(simplex, points, cluster);
  if (!report.virtually_degenerate) {
    throw std::runtime_error("constructed (3,3)-simplex is not virtually degenerate");
  }
  return {kappa, std::move(points), std::move(simplex), std::move(report)};
}

std::vector<std::size_t> first_primes(std::size_t k) {
  std::vector<std::size_t> primes;
  for (std::size_t candidate = 2; primes.size() < k; ++candidate) {
    const bool prime = std::none_of(primes.begin(), primes.end(), [&](std::size_t q) {
      return candidate % q == 0;
    });
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

namespace {

Eigen::MatrixXd divisibility_rows(const std::vector<std::size_t>& primes, std::size_t dims,
                                  bool dyadic) {
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(primes.size()),
                                                 static_cast<Eigen::Index>(dims));
  for (std::size_t n = 0; n < primes.size(); ++n) {
    const double base = dyadic ? 2.0 : static_cast<double>(primes[n]);
    for (std::size_t l = 1; l <= dims; ++l) {
      if (l % primes[n] == 0) {
        coords(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l - 1)) =
            std::pow(base, -static_cast<double>(l));
      }
    }
  }
  return coords;
}

void check_truncation(std::size_t k, std::size_t dims, const std::vector<std::size_t>& primes) {
  if (k == 0) throw std::invalid_argument("basis needs at least one vector");
  if (dims < 6) throw std::invalid_argument("truncation length must be at least 6");
  if (k >= 2 && primes[k - 2] * primes[k - 1] > dims) {
    throw std::invalid_argument("truncation length " + std::to_string(dims) +
                                " is below the largest pairwise prime product " +
                                std::to_string(primes[k - 2] * primes[k - 1]));
  }
}

}  // namespace

InfVdsBasis infvds_basis(std::size_t k, std::size_t dims, double p) {
  const auto primes = first_primes(k);
  check_truncation(k, dims, primes);
  InfVdsBasis out{LpPointSet(p, divisibility_rows(primes, dims, true), 0.0), dims, {}, true, true};

  const ClusterOptions exact{0.0, ClusterMode::Exact, kDefaultWeightTol};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      BasisPairReport pair;
      pair.first = a;
      pair.second = b;
      const auto u = out.points.point(a);
      const auto v = out.points.point(b);
      pair.hypotheses = check_pair_hypotheses(u, v, 1e-12, 0.0);
      for (auto& l : pair.hypotheses.shared_support) ++l;
      pair.kappa_is_one = pair.hypotheses.kappa && *pair.hypotheses.kappa == 1.0;
      if (pair.hypotheses.all()) {
        pair.simplex_virtually_degenerate =
            construct_vds_pair(u, v, p, 1e-12, exact).report.virtually_degenerate;
      }
      out.all_pairs_intersect = out.all_pairs_intersect && pair.hypotheses.supports_intersect;
      out.all_pairs_satisfy_hypotheses = out.all_pairs_satisfy_hypotheses &&
                                         pair.hypotheses.all() && pair.kappa_is_one &&
                                         pair.simplex_virtually_degenerate;
      out.pairs.push_back(std::move(pair));
    }
  }
  return out;
}

LpPointSet infvds_variant_basis(std::size_t k, std::size_t dims, double p) {
  const auto primes = first_primes(k);
  check_truncation(k, dims, primes);
  return LpPointSet(p, divisibility_rows(primes, dims, false), 0.0);
}

}  // namespace polyeq
