// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyeq/hilbert.hpp"
#include "polyeq/lp.hpp"
#include "polyeq/negtype.hpp"
#include "polyeq/simplex.hpp"

using namespace polyeq;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::size_t checks = 0;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

Outcome refinement_invariance() {
  Outcome o;
  Rng rng(1001);
  const std::vector<double> grid{0.3, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const auto space = oracle::random_metric(n, rng);
    const auto sx = oracle::random_simplex(n, 5, rng);
    std::vector<SignedSimplex> after;
    for (std::size_t j1 = 0; j1 < sx.s(); ++j1)
      for (std::size_t j2 = j1 + 1; j2 < sx.s(); ++j2)
        if (sx.xs()[j1].point == sx.xs()[j2].point) after.push_back(refine_merge(sx, j1, j2));
    for (std::size_t i1 = 0; i1 < sx.t(); ++i1)
      for (std::size_t i2 = i1 + 1; i2 < sx.t(); ++i2)
        if (sx.ys()[i1].point == sx.ys()[i2].point) after.push_back(refine_merge(sx, i1, i2, Side::Y));
    for (std::size_t j = 0; j < sx.s(); ++j)
      for (std::size_t i = 0; i < sx.t(); ++i)
        if (sx.xs()[j].point == sx.ys()[i].point) after.push_back(refine_cancel(sx, j, i));
    for (std::size_t j = 0; j < sx.s(); ++j) after.push_back(refine_move(sx, j));
    for (std::size_t i = 0; i < sx.t(); ++i) after.push_back(refine_move(sx, i, Side::Y));
    for (double p : grid) {
      const double g0 = gamma_p(sx, space, p).value;
      for (const auto& s2 : after) {
        const double g1 = gamma_p(s2, space, p).value;
        o.expect(close_rel(g1, g0, 1e-9), "gap changed at p=" + fmt(p) + ": " + fmt(g0) + " -> " + fmt(g1));
      }
    }
  }
  return o;
}

Outcome dichotomy_and_uniqueness() {
  Outcome o;
  Rng rng(1002);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const auto sx = trial % 4 == 0 ? oracle::random_degenerate_simplex(n, 4, rng) : oracle::random_simplex(n, 5, rng);
    const auto r = complete_refine(sx);
    const auto ref = oracle::iterative_refine(sx, kDefaultWeightTol);
    const bool degenerate = std::holds_alternative<Degenerate>(r);
    o.expect(degenerate == is_degenerate(sx), "Degenerate verdict differs from is_degenerate");
    o.expect(degenerate == ref.degenerate, "Degenerate verdict differs from the oracle");
    const auto* out = std::get_if<SignedSimplex>(&r);
    if (!out) continue;
    o.expect(is_full(*out) && is_pure(*out), "output not full and pure");
    for (const auto* side : {&out->xs(), &out->ys()})
      for (const auto& v : *side) o.expect(v.weight > 0, "non-positive weight in output");
    bool same = out->xs().size() == ref.xs.size() && out->ys().size() == ref.ys.size();
    for (std::size_t k = 0; same && k < ref.xs.size(); ++k)
      same = out->xs()[k].point == ref.xs[k].point && close_rel(out->xs()[k].weight, ref.xs[k].weight, 1e-9);
    for (std::size_t k = 0; same && k < ref.ys.size(); ++k)
      same = out->ys()[k].point == ref.ys[k].point && close_rel(out->ys()[k].weight, ref.ys[k].weight, 1e-9);
    o.expect(same, "refined form differs from the iterative oracle");
  }
  return o;
}

Outcome transition_identity() {
  Outcome o;
  Rng rng(1003);
  std::size_t done = 0;
  while (done < 200) {
    const std::size_t n = 3 + rng.index(6);
    const auto space = oracle::random_metric(n, rng);
    const auto r = complete_refine(oracle::random_simplex(n, 5, rng));
    const auto* sx = std::get_if<SignedSimplex>(&r);
    if (!sx) continue;
    ++done;
    const auto form = to_alpha(*sx);
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      const double q = alpha_quadratic_form(form, space.power_matrix(p));
      const double g = gamma_p(*sx, space, p).value;
      o.expect(close_rel(q, -2 * g, 1e-9), "form " + fmt(q) + " vs -2 gap " + fmt(-2 * g));
    }
  }
  return o;
}

Outcome four_cycle_roundness() {
  Outcome o;
  const auto c4 = cycle_metric(4);
  const auto report = generalized_roundness(c4);
  o.expect(!report.at_cap, "roundness hit the cap");
  o.expect(std::abs(report.roundness - 1.0) <= 1e-5, "roundness " + fmt(report.roundness));
  const auto w = equality_witnesses(c4, 1.0);
  o.expect(w.size() == 1, "expected one witness");
  if (w.size() == 1) {
    const Eigen::VectorXd e = vec({1, -1, 1, -1});
    const double cos = std::abs(w[0].alpha.dot(e)) / (w[0].alpha.norm() * e.norm());
    o.expect(std::abs(cos - 1.0) <= 1e-10, "witness not proportional to (1,-1,1,-1)");
    o.expect(std::abs(w[0].residual) <= 1e-10, "witness residual " + fmt(w[0].residual));
  }
  o.expect(has_strict_negative_type(c4, 0.9).holds, "not strict at p=0.9");
  o.expect(!has_strict_negative_type(c4, 1.0).holds, "strict at p=1");
  return o;
}

Outcome ultrametric_cap() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto u = random_ultrametric(2 + seed % 9, 500 + seed);
    const auto report = generalized_roundness(u);
    o.expect(report.at_cap && report.p_max == 16.0 && report.roundness == 16.0,
             "seed " + std::to_string(seed) + " not at cap");
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0})
      o.expect(has_strict_negative_type(u, p).holds, "seed " + std::to_string(seed) + " not strict at p=" + fmt(p));
  }
  return o;
}

Outcome vd_classification() {
  Outcome o;
  Rng rng(1006);
  std::size_t vd_count = 0, produced = 0;
  while (produced < 200) {
    const double p = std::vector<double>{0.5, 1.0, 1.5}[produced % 3];
    const std::size_t n = 4 + rng.index(5);
    const LpPointSet ps(p, oracle::random_integer_points(n, 3, 0, 2, rng));
    std::optional<SignedSimplex> sx;
    const auto kernel = vd_kernel(ps);
    if (produced % 2 == 0) {
      if (kernel.dimension() == 0) continue;
      Eigen::VectorXd coeff(kernel.basis.cols());
      for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = static_cast<double>(rng.integer(-2, 2));
      const Eigen::VectorXd alpha = kernel.basis * coeff;
      if (alpha.cwiseAbs().maxCoeff() <= 1e-6) continue;
      sx = from_alpha(alpha);
    } else {
      sx = oracle::random_simplex(n, 4, rng, false);
      if (is_degenerate(*sx)) continue;
    }
    ++produced;
    const bool vd = is_virtually_degenerate(*sx, ps).virtually_degenerate;
    const double g = gamma_p_lp(*sx, ps).value;
    o.expect((std::abs(g) <= 1e-9) == vd, "gap " + fmt(g) + " but VD=" + std::to_string(vd));
    if (!vd) continue;
    ++vd_count;
    for (double q : {2.5, 3.0}) {
      const double gq = gamma_p_lp(*sx, LpPointSet(q, ps.coords())).value;
      o.expect(std::abs(gq) <= 1e-9, "VD simplex has gap " + fmt(gq) + " at p=" + fmt(q));
    }
  }
  o.expect(vd_count >= 100, "too few VD simplices sampled");
  if (o.ok) o.detail = std::to_string(vd_count) + " VD";
  return o;
}

Outcome counterexample_fixture() {
  Outcome o;
  Eigen::MatrixXd c(4, 2);
  c << 0, 0, 1, 1, 3, 1, 2, 0;
  o.expect(vd_kernel(LpPointSet(1.0, c)).dimension() == 0, "kernel not trivial");
  for (double p : {0.5, 1.0, 1.5}) {
    const auto s = strict_p_negtype_lp(LpPointSet(p, c));
    o.expect(s.strict, "VD criterion not strict at p=" + fmt(p));
    o.expect(s.eigen.holds, "eigenvalue criterion not strict at p=" + fmt(p));
  }
  const LpPointSet e2(2.0, c);
  const SignedSimplex pairing(4, {{0, 1}, {2, 1}}, {{1, 1}, {3, 1}});
  o.expect(is_balanced(pairing, e2), "pairing not balanced");
  o.expect(std::abs(gamma_p_lp(pairing, e2).value) <= 1e-12, "gap_2 of pairing not zero");
  o.expect(!strict_2_negtype(e2).strict, "strict 2-negative type reported");
  return o;
}

Outcome hilbert_identity() {
  Outcome o;
  Rng rng(1008);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), 4);
    for (Eigen::Index r = 0; r < c.rows(); ++r)
      for (Eigen::Index w = 0; w < 4; ++w) c(r, w) = rng.uniform(-3, 3);
    const LpPointSet ps(2.0, c);
    const auto id = gamma2_identity(oracle::random_simplex(n, 5, rng), ps);
    o.expect(close_rel(id.gap, id.lhs, 1e-10), "gap " + fmt(id.gap) + " vs norm " + fmt(id.lhs));
  }
  return o;
}

Outcome elsner_equivalence() {
  Outcome o;
  Rng rng(1009);
  auto family = [&](std::size_t count, std::size_t dims) {
    std::vector<Eigen::VectorXd> f(count, Eigen::VectorXd(static_cast<Eigen::Index>(dims)));
    for (auto& v : f)
      for (Eigen::Index w = 0; w < v.size(); ++w) v(w) = std::round(rng.uniform(-2, 2) * 4) / 4;
    return f;
  };
  auto permute = [&](const std::vector<Eigen::VectorXd>& xs) {
    auto ys = xs;
    for (Eigen::Index w = 0; w < xs[0].size(); ++w)
      for (std::size_t k = ys.size(); k > 1; --k) std::swap(ys[k - 1](w), ys[rng.index(k)](w));
    return ys;
  };
  auto multiset_equal = [](std::vector<Eigen::VectorXd> a, std::vector<Eigen::VectorXd> b) {
    auto less = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
      return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
    };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    return a == b;
  };
  for (int kind = 0; kind < 2; ++kind) {
    int made = 0;
    while (made < 100) {
      const std::size_t count = 2 + rng.index(5), dims = 1 + rng.index(4);
      const auto xs = family(count, dims);
      auto ys = permute(xs);
      if (kind == 1) ys[rng.index(count)](static_cast<Eigen::Index>(rng.index(dims))) += rng.coin() ? 0.05 : -0.05;
      if (multiset_equal(xs, ys)) continue;
      ++made;
      for (double p : {0.5, 1.0, 1.5}) {
        const auto r = elsner_identity_check(xs, ys, p);
        if (kind == 0) {
          o.expect(r.equality_holds && r.per_coordinate_identical, "permuted pair not identified at p=" + fmt(p));
        } else {
          o.expect(!r.equality_holds && !r.per_coordinate_identical && r.residual > 0,
                   "perturbed pair residual " + fmt(r.residual) + " at p=" + fmt(p));
        }
      }
    }
  }
  return o;
}

Outcome constructions() {
  Outcome o;
  const auto pair = construct_vds_pair(vec({1, 1, 0}), vec({0, 1, 1}));
  o.expect(pair.report.virtually_degenerate, "(3,3)-simplex not virtually degenerate");
  o.expect(pair.report.coordinates.size() == 3, "expected 3 coordinates");
  for (const auto& c : pair.report.coordinates)
    o.expect(c.degenerate, "coordinate " + std::to_string(c.omega) + " not degenerate");
  const auto basis = infvds_basis(3, 30);
  o.expect(basis.pairs.size() == 3, "expected 3 pairs");
  o.expect(basis.all_pairs_intersect, "supports do not pairwise intersect");
  o.expect(basis.all_pairs_satisfy_hypotheses, "pair hypotheses fail");
  for (const auto& pr : basis.pairs) {
    o.expect(pr.hypotheses.all(), "pair " + std::to_string(pr.first) + "," + std::to_string(pr.second) + " fails");
    o.expect(pr.kappa_is_one && pr.hypotheses.kappa && std::abs(*pr.hypotheses.kappa - 1.0) <= 1e-12,
             "kappa differs from 1");
  }
  return o;
}

Outcome kernel_completeness() {
  Outcome o;
  std::vector<std::vector<int>> grid;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) grid.push_back({a, b});
  std::size_t sets = 0;
  for (unsigned mask = 1; mask < (1u << 9); ++mask) {
    if (std::popcount(mask) > 5) continue;
    std::vector<std::vector<int>> pts;
    for (unsigned k = 0; k < 9; ++k)
      if (mask & (1u << k)) pts.push_back(grid[k]);
    Eigen::MatrixXd c(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t r = 0; r < pts.size(); ++r) c.row(static_cast<Eigen::Index>(r)) << pts[r][0], pts[r][1];
    ++sets;
    o.expect((vd_kernel(LpPointSet(1.0, c)).dimension() > 0) == oracle::brute_force_vd_exists(pts),
             "disagreement on subset mask " + std::to_string(mask));
  }
  if (o.ok) o.detail = std::to_string(sets) + " sets";
  return o;
}

Outcome metric_transform_bridge() {
  Outcome o;
  Rng rng(1012);
  for (int trial = 0; trial < 50; ++trial) {
    const auto space = oracle::random_metric(3 + rng.index(6), rng);
    for (double p : {0.5, 1.0, 1.5}) {
      const bool direct = has_strict_negative_type(space, p).holds;
      const bool bridged = has_strict_negative_type(metric_transform(space, p), 2.0).holds;
      o.expect(direct == bridged, "strictness differs at p=" + fmt(p));
    }
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"refinement invariance", refinement_invariance},
      {"dichotomy and uniqueness of complete refinement", dichotomy_and_uniqueness},
      {"transition identity", transition_identity},
      {"4-cycle roundness and witness", four_cycle_roundness},
      {"ultrametric cap", ultrametric_cap},
      {"virtual degeneracy classification", vd_classification},
      {"counterexample fixture", counterexample_fixture},
      {"Hilbert identity", hilbert_identity},
      {"Elsner equivalence", elsner_equivalence},
      {"(3,3)-simplex and prime-divisibility constructions", constructions},
      {"kernel completeness against brute force", kernel_completeness},
      {"metric-transform bridge", metric_transform_bridge},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failures;
    std::printf("%s %2zu %s (%zu checks, %.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.checks, secs, o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures ? 1 : 0;
}
