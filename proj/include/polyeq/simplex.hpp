#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "polyeq/metric.hpp"

namespace polyeq {

inline constexpr double kDefaultWeightTol = 1e-9;

enum class Side { X, Y };

/// A weighted vertex: an index into the universe's points and a real weight.
struct Vertex {
  std::size_t point = 0;
  double weight = 0.0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Signed (s,t)-simplex [x_j(m_j); y_i(n_i)] over a universe of
/// `universe_size` points. Points may repeat within and across sides and
/// weights may have any sign, but the two sides carry equal total weight.
class SignedSimplex {
 public:
  /// Throws std::invalid_argument if a side is empty, a point index is out of
  /// range, a weight is not finite, or |sum m - sum n| > eps_w.
  SignedSimplex(std::size_t universe_size, std::vector<Vertex> xs, std::vector<Vertex> ys,
                double eps_w = kDefaultWeightTol);

  std::size_t universe_size() const { return universe_size_; }
  const std::vector<Vertex>& xs() const { return xs_; }
  const std::vector<Vertex>& ys() const { return ys_; }
  const std::vector<Vertex>& side(Side which) const { return which == Side::X ? xs_ : ys_; }
  std::size_t s() const { return xs_.size(); }
  std::size_t t() const { return ys_.size(); }

  /// The same simplex with the roles of the two sides exchanged. All gaps are
  /// unchanged; m and n swap.
  SignedSimplex swapped() const;

  friend bool operator==(const SignedSimplex&, const SignedSimplex&) = default;

 private:
  std::size_t universe_size_;
  std::vector<Vertex> xs_;
  std::vector<Vertex> ys_;
};

/// m(z) and n(z) for one distinct point z of the simplex.
struct Repetition {
  double m = 0.0;
  double n = 0.0;
};

/// Keyed by point index; exactly the points occurring in the simplex.
using RepeatingNumbers = std::map<std::size_t, Repetition>;

RepeatingNumbers repeating_numbers(const SignedSimplex& simplex);

/// |m(z) - n(z)| <= eps for every point z of the simplex.
bool is_degenerate(const SignedSimplex& simplex, double eps = kDefaultWeightTol);

/// Merge two vertices on the same side that sit at the same point; the merged
/// vertex keeps the lower index. Throws on distinct points or equal indices.
SignedSimplex refine_merge(const SignedSimplex& simplex, std::size_t j1, std::size_t j2,
                           Side side = Side::X);

/// Cancel x_j(m_j) against y_i(n_i) at a shared point:
/// x_j -> weight 0, y_i -> weight n_i - m_j.
SignedSimplex refine_cancel(const SignedSimplex& simplex, std::size_t j, std::size_t i);

/// Move a vertex to the other side with negated weight. The source vertex is
/// kept with weight 0 and the moved copy is appended to the other side.
SignedSimplex refine_move(const SignedSimplex& simplex, std::size_t k, Side from = Side::X);

/// Full: no point repeats within a side. Pure: no point on both sides.
bool is_full(const SignedSimplex& simplex);
bool is_pure(const SignedSimplex& simplex);
bool is_completely_refined(const SignedSimplex& simplex);

struct Degenerate {};

using Refinement = std::variant<Degenerate, SignedSimplex>;

/// Reduces a simplex to its unique completely refined form: the x-side holds
/// the points with m(z) > n(z) at weight m(z) - n(z), the y-side the points
/// with n(z) > m(z) at weight n(z) - m(z), both sorted by point index.
/// Differences within eps count as zero; if all do, the simplex is Degenerate.
Refinement complete_refine(const SignedSimplex& simplex, double eps = kDefaultWeightTol);

/// Simplices are equivalent when their complete refinements coincide (within
/// eps on weights). Degenerate simplices are all equivalent to each other.
bool equivalent(const SignedSimplex& a, const SignedSimplex& b, double eps = kDefaultWeightTol);

struct GapValue {
  double p = 0.0;
  double value = 0.0;
};

/// Gap with an arbitrary precomputed kernel K(a,b) standing in for d(a,b)^p:
/// sum m_j n_i K(x_j,y_i) - sum_{j1<j2} m m K(x,x) - sum_{i1<i2} n n K(y,y).
double simplex_gap(const SignedSimplex& simplex, const Eigen::MatrixXd& kernel);

/// p-simplex gap in a metric space, d^0 = 1 between distinct points.
GapValue gamma_p(const SignedSimplex& simplex, const FiniteMetricSpace& space, double p);

/// Weight-vector form of a completely refined simplex: points are the x-side
/// followed by the y-side; alpha is m on the x-side and -n on the y-side.
struct AlphaForm {
  std::vector<std::size_t> points;
  Eigen::VectorXd alpha;
};

AlphaForm to_alpha(const SignedSimplex& simplex);

/// sum_{j,i} K(z_j,z_i) alpha_j alpha_i.
double alpha_quadratic_form(const AlphaForm& form, const Eigen::MatrixXd& kernel);

/// Splits a zero-sum weight vector by sign: positive entries become x-vertices,
/// negative entries become y-vertices with weight -alpha, and entries with
/// |alpha| <= eps_w are dropped. Throws if no entry survives on either side or
/// the entries do not sum to zero.
SignedSimplex from_alpha(std::size_t universe_size, const std::vector<std::size_t>& points,
                         const Eigen::VectorXd& alpha, double eps_w = kDefaultWeightTol);

/// Convenience overload for alpha indexed by the universe itself (point k has
/// weight alpha[k]).
SignedSimplex from_alpha(const Eigen::VectorXd& alpha, double eps_w = kDefaultWeightTol);

}  // namespace polyeq
