#include "polyeq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace polyeq {

namespace {

double total(const std::vector<Vertex>& side) {
  double sum = 0.0;
  for (const auto& v : side) sum += v.weight;
  return sum;
}

double abs_total(const std::vector<Vertex>& side) {
  double sum = 0.0;
  for (const auto& v : side) sum += std::abs(v.weight);
  return sum;
}

void check_index(std::size_t k, std::size_t size, const char* what) {
  if (k >= size) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(k) + " out of range");
  }
}

double kernel_at(const Eigen::MatrixXd& kernel, std::size_t a, std::size_t b) {
  return kernel(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
}

}  // namespace

SignedSimplex::SignedSimplex(std::size_t universe_size, std::vector<Vertex> xs,
                             std::vector<Vertex> ys, double eps_w)
    : universe_size_(universe_size), xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || ys_.empty()) throw std::invalid_argument("simplex sides must be non-empty");
  for (const auto* side : {&xs_, &ys_}) {
    for (const auto& v : *side) {
      if (v.point >= universe_size_) {
        throw std::invalid_argument("vertex point " + std::to_string(v.point) +
                                    " is outside the universe of " +
                                    std::to_string(universe_size_) + " points");
      }
      if (!std::isfinite(v.weight)) throw std::invalid_argument("vertex weight is not finite");
    }
  }
  const double defect = total(xs_) - total(ys_);
  if (std::abs(defect) > eps_w) {
    throw std::invalid_argument("side weights differ by " + std::to_string(defect));
  }
}

SignedSimplex SignedSimplex::swapped() const {
  return SignedSimplex(universe_size_, ys_, xs_, std::numeric_limits<double>::infinity());
}

RepeatingNumbers repeating_numbers(const SignedSimplex& simplex) {
  RepeatingNumbers out;
  for (const auto& v : simplex.xs()) out[v.point].m += v.weight;
  for (const auto& v : simplex.ys()) out[v.point].n += v.weight;
  return out;
}

bool is_degenerate(const SignedSimplex& simplex, double eps) {
  for (const auto& [point, rep] : repeating_numbers(simplex)) {
    if (std::abs(rep.m - rep.n) > eps) return false;
  }
  return true;
}

SignedSimplex refine_merge(const SignedSimplex& simplex, std::size_t j1, std::size_t j2,
                           Side side) {
  auto vertices = simplex.side(side);
  check_index(j1, vertices.size(), "merge");
  check_index(j2, vertices.size(), "merge");
  if (j1 == j2) throw std::invalid_argument("merge needs two distinct vertices");
  if (vertices[j1].point != vertices[j2].point) {
    throw std::invalid_argument("merge vertices reference different points");
  }
  const auto keep = std::min(j1, j2);
  const auto drop = std::max(j1, j2);
  vertices[keep].weight += vertices[drop].weight;
  vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(drop));
  const double inf = std::numeric_limits<double>::infinity();
  if (side == Side::X) return SignedSimplex(simplex.universe_size(), vertices, simplex.ys(), inf);
  return SignedSimplex(simplex.universe_size(), simplex.xs(), vertices, inf);
}

SignedSimplex refine_cancel(const SignedSimplex& simplex, std::size_t j, std::size_t i) {
  auto xs = simplex.xs();
  auto ys = simplex.ys();
  check_index(j, xs.size(), "x-vertex");
  check_index(i, ys.size(), "y-vertex");
  if (xs[j].point != ys[i].point) {
    throw std::invalid_argument("cancel vertices reference different points");
  }
  ys[i].weight -= xs[j].weight;
  xs[j].weight = 0.0;
  return SignedSimplex(simplex.universe_size(), std::move(xs), std::move(ys),
                       std::numeric_limits<double>::infinity());
}

SignedSimplex refine_move(const SignedSimplex& simplex, std::size_t k, Side from) {
  auto source = simplex.side(from);
  auto target = simplex.side(from == Side::X ? Side::Y : Side::X);
  check_index(k, source.size(), "move");
  target.push_back({source[k].point, -source[k].weight});
  source[k].weight = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (from == Side::X) return SignedSimplex(simplex.universe_size(), source, target, inf);
  return SignedSimplex(simplex.universe_size(), target, source, inf);
}

bool is_full(const SignedSimplex& simplex) {
  for (auto side : {Side::X, Side::Y}) {
    std::set<std::size_t> seen;
    for (const auto& v : simplex.side(side)) {
      if (!seen.insert(v.point).second) return false;
    }
  }
  return true;
}

bool is_pure(const SignedSimplex& simplex) {
  std::set<std::size_t> xs;
  for (const auto& v : simplex.xs()) xs.insert(v.point);
  for (const auto& v : simplex.ys()) {
    if (xs.count(v.point)) return false;
  }
  return true;
}

bool is_completely_refined(const SignedSimplex& simplex) {
  if (!is_full(simplex) || !is_pure(simplex)) return false;
  for (auto side : {Side::X, Side::Y}) {
    for (const auto& v : simplex.side(side)) {
      if (!(v.weight > 0.0)) return false;
    }
  }
  return true;
}

Refinement complete_refine(const SignedSimplex& simplex, double eps) {
  std::vector<Vertex> xs;
  std::vector<Vertex> ys;
  for (const auto& [point, rep] : repeating_numbers(simplex)) {
    const double diff = rep.m - rep.n;
    if (diff > eps) {
      xs.push_back({point, diff});
    } else if (diff < -eps) {
      ys.push_back({point, -diff});
    }
  }
  if (xs.empty() && ys.empty()) return Degenerate{};
  if (xs.empty() || ys.empty()) {
    // Only reachable when eps discards mass comparable to a surviving weight.
    throw std::runtime_error("complete refinement left one side empty; tolerance too coarse");
  }
  const double slack = eps * static_cast<double>(simplex.s() + simplex.t()) +
                       1e-12 * std::max(1.0, abs_total(xs));
  return SignedSimplex(simplex.universe_size(), std::move(xs), std::move(ys), slack);
}

bool equivalent(const SignedSimplex& a, const SignedSimplex& b, double eps) {
  const auto ra = complete_refine(a, eps);
  const auto rb = complete_refine(b, eps);
  const bool da = std::holds_alternative<Degenerate>(ra);
  const bool db = std::holds_alternative<Degenerate>(rb);
  if (da || db) return da && db;
  const auto& sa = std::get<SignedSimplex>(ra);
  const auto& sb = std::get<SignedSimplex>(rb);
  for (auto side : {Side::X, Side::Y}) {
    const auto& va = sa.side(side);
    const auto& vb = sb.side(side);
    if (va.size() != vb.size()) return false;
    for (std::size_t k = 0; k < va.size(); ++k) {
      if (va[k].point != vb[k].point || std::abs(va[k].weight - vb[k].weight) > eps) return false;
    }
  }
  return true;
}

double simplex_gap(const SignedSimplex& simplex, const Eigen::MatrixXd& kernel) {
  const auto& xs = simplex.xs();
  const auto& ys = simplex.ys();
  double cross = 0.0;
  for (const auto& x : xs) {
    for (const auto& y : ys) cross += x.weight * y.weight * kernel_at(kernel, x.point, y.point);
  }
  double within = 0.0;
  for (const auto* side : {&xs, &ys}) {
    for (std::size_t a = 0; a < side->size(); ++a) {
      for (std::size_t b = a + 1; b < side->size(); ++b) {
        within += (*side)[a].weight * (*side)[b].weight *
                  kernel_at(kernel, (*side)[a].point, (*side)[b].point);
      }
    }
  }
  return cross - within;
}

GapValue gamma_p(const SignedSimplex& simplex, const FiniteMetricSpace& space, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("gap exponent must be non-negative");
  if (simplex.universe_size() != space.size()) {
    throw std::invalid_argument("simplex universe does not match the metric space");
  }
  return {p, simplex_gap(simplex, space.power_matrix(p))};
}

AlphaForm to_alpha(const SignedSimplex& simplex) {
  if (!is_completely_refined(simplex)) {
    throw std::invalid_argument("alpha form requires a completely refined simplex");
  }
  AlphaForm form;
  form.alpha.resize(static_cast<Eigen::Index>(simplex.s() + simplex.t()));
  Eigen::Index k = 0;
  for (const auto& v : simplex.xs()) {
    form.points.push_back(v.point);
    form.alpha(k++) = v.weight;
  }
  for (const auto& v : simplex.ys()) {
    form.points.push_back(v.point);
    form.alpha(k++) = -v.weight;
  }
  return form;
}

double alpha_quadratic_form(const AlphaForm& form, const Eigen::MatrixXd& kernel) {
  double sum = 0.0;
  for (std::size_t j = 0; j < form.points.size(); ++j) {
    for (std::size_t i = 0; i < form.points.size(); ++i) {
      sum += kernel_at(kernel, form.points[j], form.points[i]) *
             form.alpha(static_cast<Eigen::Index>(j)) * form.alpha(static_cast<Eigen::Index>(i));
    }
  }
  return sum;
}

SignedSimplex from_alpha(std::size_t universe_size, const std::vector<std::size_t>& points,
                         const Eigen::VectorXd& alpha, double eps_w) {
  if (points.size() != static_cast<std::size_t>(alpha.size())) {
    throw std::invalid_argument("alpha length does not match the point list");
  }
  const double scale = std::max(1.0, alpha.cwiseAbs().sum());
  if (std::abs(alpha.sum()) > eps_w * scale) {
    throw std::invalid_argument("alpha does not sum to zero");
  }
  std::vector<Vertex> xs;
  std::vector<Vertex> ys;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double a = alpha(static_cast<Eigen::Index>(k));
    if (a > eps_w) {
      xs.push_back({points[k], a});
    } else if (a < -eps_w) {
      ys.push_back({points[k], -a});
    }
  }
  if (xs.empty() && ys.empty()) throw std::invalid_argument("alpha has no non-zero entries");
  if (xs.empty() || ys.empty()) throw std::invalid_argument("alpha entries all have one sign");
  const double slack = eps_w * scale * static_cast<double>(points.size() + 1);
  return SignedSimplex(universe_size, std::move(xs), std::move(ys), slack);
}

SignedSimplex from_alpha(const Eigen::VectorXd& alpha, double eps_w) {
  std::vector<std::size_t> points(static_cast<std::size_t>(alpha.size()));
  std::iota(points.begin(), points.end(), std::size_t{0});
  return from_alpha(points.size(), points, alpha, eps_w);
}

}  // namespace polyeq
