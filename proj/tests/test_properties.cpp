#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polyeq/hilbert.hpp"
#include "polyeq/io.hpp"
#include "polyeq/negtype.hpp"

using namespace polyeq;

namespace {

LpPointSet random_real_points(std::size_t n, std::size_t dims, double p, Rng& rng) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
  for (Eigen::Index r = 0; r < c.rows(); ++r)
    for (Eigen::Index w = 0; w < c.cols(); ++w) c(r, w) = rng.uniform(-2, 2);
  return LpPointSet(p, c);
}

SignedSimplex simplex_from_kernel_column(const VdKernel& kernel, Eigen::Index col) {
  return from_alpha(kernel.basis.col(col));
}

}  // namespace

TEST_CASE("metric transform carries strict p-type to strict 2-type") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto space = trial % 3 == 0 ? cycle_metric(4 + trial % 5) : oracle::random_metric(6, rng);
    for (double p : {0.5, 1.0, 1.5}) {
      CHECK(has_strict_negative_type(space, p).holds ==
            has_strict_negative_type(metric_transform(space, p), 2.0).holds);
      CHECK(has_negative_type(space, p).holds == has_negative_type(metric_transform(space, p), 2.0).holds);
    }
  }
}

TEST_CASE("point-set gaps agree with the induced metric") {
  Rng rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    const double p = std::vector<double>{0.5, 1.0, 1.5, 2.0, 3.0}[trial % 5];
    const auto ps = random_real_points(6, 3, p, rng);
    const auto sx = oracle::random_simplex(6, 4, rng);
    const auto metric = lp_distance_matrix(ps);
    const double via_metric = gamma_p(sx, metric, p < 1 ? 1.0 : p).value;
    const double direct = gamma_p_lp(sx, ps).value;
    CHECK(std::abs(via_metric - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("gaps depend only on the complete refinement") {
  Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const auto space = oracle::random_metric(7, rng);
    const auto sx = oracle::random_simplex(7, 6, rng);
    const double p = rng.uniform(0.2, 3.0);
    const double g = gamma_p(sx, space, p).value;
    CHECK(gamma_p(sx.swapped(), space, p).value == doctest::Approx(g).epsilon(1e-12));
    const auto refined = complete_refine(sx);
    const double tol = 1e-9 * std::max(1.0, oracle::gap_scale(sx, space.power_matrix(p)));
    if (std::holds_alternative<Degenerate>(refined)) {
      CHECK(std::abs(g) <= tol);
    } else {
      CHECK(std::abs(gamma_p(std::get<SignedSimplex>(refined), space, p).value - g) <= tol);
    }
  }
}

TEST_CASE("witnesses exist exactly when strictness fails, and yield polygonal equalities") {
  Rng rng(109);
  for (int trial = 0; trial < 30; ++trial) {
    const auto space = trial % 2 ? cycle_metric(4 + 2 * (trial % 3)) : oracle::random_metric(5, rng);
    const double p = trial % 2 ? 1.0 : 0.7;
    REQUIRE(has_negative_type(space, p).holds);
    const auto witnesses = equality_witnesses(space, p);
    CHECK(witnesses.empty() == has_strict_negative_type(space, p).holds);
    for (const auto& w : witnesses) {
      const auto sx = from_alpha(w.alpha);
      CHECK_FALSE(is_degenerate(sx));
      CHECK(std::abs(gamma_p(sx, space, p).value) <= w.tolerance);
    }
  }
}

TEST_CASE("virtually degenerate kernel vectors vanish at every exponent") {
  Rng rng(113);
  int seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.index(4);
    const LpPointSet ps(1.0, oracle::random_integer_points(n, 2, 0, 2, rng));
    const auto kernel = vd_kernel(ps);
    for (Eigen::Index c = 0; c < kernel.basis.cols(); ++c) {
      ++seen;
      const auto sx = simplex_from_kernel_column(kernel, c);
      CHECK(is_virtually_degenerate(sx, ps).virtually_degenerate);
      for (double p : {0.3, 1.0, 1.7, 2.0, 2.5, 4.0}) {
        const LpPointSet at_p(p, ps.coords());
        CHECK(std::abs(gamma_p_lp(sx, at_p).value) <= 1e-9);
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("the three strictness pipelines agree") {
  Rng rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    const std::size_t dims = 1 + rng.index(3);
    const auto coords = trial % 2 ? random_real_points(n, dims, 2.0, rng).coords()
                                  : oracle::random_integer_points(n, dims, 0, 2 + static_cast<int>(n), rng);
    const auto s2 = strict_2_negtype(LpPointSet(2.0, coords));
    CHECK(s2.agrees);
    CHECK(s2.strict == has_strict_negative_type(lp_distance_matrix(LpPointSet(2.0, coords)), 2.0).holds);
    const LpPointSet l1(1.0, coords);
    const auto s1 = strict_p_negtype_lp(l1);
    CHECK(s1.agrees);
    CHECK(s1.strict == has_strict_negative_type(lp_distance_matrix(l1), 1.0).holds);
    if (s2.strict) CHECK(has_strict_negative_type(lp_distance_matrix(LpPointSet(2.0, coords)), 1.0).holds);
  }
}

TEST_CASE("balanced simplices are exactly the 2-polygonal equalities") {
  Rng rng(131);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ps = random_real_points(5, 2, 2.0, rng);
    const auto dep = affine_dependence(ps);
    REQUIRE(dep.dependency);
    const auto sx = balanced_simplex_from_dependency(ps, *dep.dependency);
    const auto cls = classify_2_polygonal(sx, ps);
    CHECK(cls.balanced);
    CHECK(cls.gap_zero);
    CHECK(gamma2_identity(sx, ps).lhs <= 1e-20);
  }
}

TEST_CASE("file formats round trip") {
  Rng rng(137);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = oracle::random_metric(2 + trial % 6, rng);
    const auto doc = io::metric_to_json(space);
    const auto back = io::metric_from_json(io::json::parse(doc.dump()));
    CHECK(back.matrix() == space.matrix());
    CHECK(back.labels() == space.labels());

    const auto ps = random_real_points(4, 3, rng.uniform(0.2, 3.0), rng);
    const auto pback = io::points_from_json(io::json::parse(io::points_to_json(ps).dump()));
    CHECK(pback.coords() == ps.coords());
    CHECK(pback.p() == ps.p());

    const auto sx = oracle::random_simplex(4, 4, rng);
    const io::json sdoc = io::simplex_to_json(sx, io::points_to_json(ps));
    CHECK(io::simplex_from_json(io::json::parse(sdoc.dump()), ".").simplex == sx);
  }
}
