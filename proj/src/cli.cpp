#include "polyeq/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "polyeq/io.hpp"

namespace polyeq::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

struct Tolerances {
  double eps_w = kDefaultWeightTol;
  double eps_c = kDefaultCoordinateTol;
  double eps_eig = 1e-8;
  double eps_tri = kDefaultTriangleTol;
  double tol_p = 1e-6;
  double p_max = 16.0;
  bool exact = false;

  io::ParseOptions parse() const { return {eps_tri, eps_c, eps_w}; }
  ClusterOptions cluster() const {
    return {eps_c, exact ? ClusterMode::Exact : ClusterMode::Chain, eps_w};
  }
  EigenTolerance eig() const {
    EigenTolerance t;
    t.relative = eps_eig;
    return t;
  }
  json to_json() const {
    return {{"eps_w", eps_w},     {"eps_c", eps_c}, {"eps_eig", eps_eig},
            {"eps_tri", eps_tri}, {"tol_p", tol_p}, {"p_max", p_max},
            {"cluster_mode", exact ? "exact" : "chain"}};
  }
};

struct Outcome {
  json inputs = json::object();
  json results = json::object();
  int code = kOk;
};

struct ConstructFlags {
  std::string kind;
  std::string out_dir = ".";
  double p = 1.0;
  std::vector<double> u;
  std::vector<double> v;
  std::size_t count = 3;
  std::size_t dims = 30;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--eps-w", tol.eps_w, "weight tolerance")->capture_default_str();
  cmd->add_option("--eps-c", tol.eps_c, "coordinate clustering tolerance")->capture_default_str();
  cmd->add_option("--eps-eig", tol.eps_eig, "relative eigenvalue tolerance")->capture_default_str();
  cmd->add_option("--eps-tri", tol.eps_tri, "triangle inequality slack")->capture_default_str();
  cmd->add_option("--tol-p", tol.tol_p, "bisection width")->capture_default_str();
  cmd->add_option("--p-max", tol.p_max, "bisection cap")->capture_default_str();
  cmd->add_flag("--exact", tol.exact, "cluster bitwise-equal coordinates only");
}

io::SimplexFile load_simplex(const std::string& file, const Tolerances& tol) {
  const fs::path path(file);
  return io::simplex_from_json(io::read_json_file(path), path.parent_path(), tol.parse());
}

const LpPointSet& require_points(const io::SimplexFile& sf, const char* command) {
  if (const auto* points = std::get_if<LpPointSet>(&sf.universe)) return *points;
  throw std::invalid_argument(std::string(command) + " needs a point-set universe");
}

double universe_exponent(const io::SimplexFile& sf, std::optional<double> p) {
  if (p) return *p;
  if (const auto* points = std::get_if<LpPointSet>(&sf.universe)) return points->p();
  return 1.0;
}

json witnesses_json(const std::vector<EqualityWitness>& witnesses) {
  json out = json::array();
  for (const auto& w : witnesses) out.push_back(io::to_json(w));
  return out;
}

Outcome cmd_roundness(const std::string& file, const Tolerances& tol) {
  const auto space = io::metric_from_json(io::read_json_file(file), tol.eps_tri);
  RoundnessOptions options;
  options.p_max = tol.p_max;
  options.tol_p = tol.tol_p;
  options.eig = tol.eig();
  const RoundnessReport report = generalized_roundness(space, options);

  // Below the cap the witness window is widened in proportion to tol_p.
  EigenTolerance witness_tol = tol.eig();
  const double witness_p = report.at_cap ? report.p_max : report.roundness;
  if (!report.at_cap) witness_tol.relative = std::max(tol.eps_eig, 100.0 * tol.tol_p);

  Outcome out;
  out.inputs = {{"metric_file", file}, {"points", space.size()}};
  out.results = io::to_json(report);
  out.results["witness_p"] = witness_p;
  out.results["witness_eps_eig"] = witness_tol.relative;
  out.results["witnesses"] = witnesses_json(equality_witnesses(space, witness_p, witness_tol));
  return out;
}

Outcome cmd_witness(const std::string& file, double p, bool expect, const Tolerances& tol) {
  const auto space = io::metric_from_json(io::read_json_file(file), tol.eps_tri);
  Outcome out;
  out.inputs = {{"metric_file", file}, {"p", p}, {"expect_witness", expect}};
  const EigenCertificate type = has_negative_type(space, p, tol.eig());
  const EigenCertificate strict = has_strict_negative_type(space, p, tol.eig());
  out.results = {{"negative_type", io::to_json(type)}, {"strict_negative_type", io::to_json(strict)}};
  if (!type.holds) {
    out.results["witnesses"] = json::array();
    out.code = kNegativeVerdict;
    return out;
  }
  const auto witnesses = equality_witnesses(space, p, tol.eig());
  out.results["witnesses"] = witnesses_json(witnesses);
  if (expect && witnesses.empty()) out.code = kNegativeVerdict;
  return out;
}

Outcome cmd_gap(const std::string& file, std::optional<double> p_flag, const Tolerances& tol) {
  const auto sf = load_simplex(file, tol);
  const double p = universe_exponent(sf, p_flag);
  Outcome out;
  out.inputs = {{"simplex_file", file}, {"p", p}};
  GapValue gap;
  if (const auto* space = std::get_if<FiniteMetricSpace>(&sf.universe)) {
    gap = gamma_p(sf.simplex, *space, p);
    out.inputs["universe"] = "metric";
  } else {
    const auto& points = std::get<LpPointSet>(sf.universe);
    gap = gamma_p_lp(sf.simplex, LpPointSet(p, points.coords(), tol.eps_c));
    out.inputs["universe"] = "points";
  }
  out.results = {{"p", gap.p},
                 {"gap", gap.value},
                 {"degenerate", is_degenerate(sf.simplex, tol.eps_w)}};
  return out;
}

Outcome cmd_refine(const std::string& file, const Tolerances& tol) {
  const auto sf = load_simplex(file, tol);
  Outcome out;
  out.inputs = {{"simplex_file", file}};
  const Refinement refined = complete_refine(sf.simplex, tol.eps_w);
  out.results = {{"repeating_numbers", io::to_json(repeating_numbers(sf.simplex))},
                 {"full", is_full(sf.simplex)},
                 {"pure", is_pure(sf.simplex)},
                 {"completely_refined", is_completely_refined(sf.simplex)},
                 {"degenerate", std::holds_alternative<Degenerate>(refined)}};
  if (const auto* simplex = std::get_if<SignedSimplex>(&refined)) {
    const AlphaForm form = to_alpha(*simplex);
    out.results["refined"] = io::to_json(*simplex);
    out.results["alpha"] = {{"points", form.points}, {"alpha", io::to_json(form.alpha)}};
  } else {
    out.results["refined"] = nullptr;
    out.results["alpha"] = nullptr;
  }
  return out;
}

Outcome cmd_vd_check(const std::string& file, const Tolerances& tol) {
  const auto sf = load_simplex(file, tol);
  const LpPointSet& points = require_points(sf, "vd-check");
  Outcome out;
  out.inputs = {{"simplex_file", file}, {"p", points.p()}};
  out.results = io::to_json(is_virtually_degenerate(sf.simplex, points, tol.cluster()));
  out.results["balanced"] = is_balanced(sf.simplex, points, tol.eps_c);
  out.results["gap"] = gamma_p_lp(sf.simplex, points).value;
  return out;
}

Outcome cmd_vd_solve(const std::string& file, const Tolerances& tol) {
  const auto points = io::points_from_json(io::read_json_file(file), tol.eps_c);
  Outcome out;
  out.inputs = {{"points_file", file}, {"p", points.p()}, {"points", points.size()}};
  const VdKernel kernel = vd_kernel(points, tol.cluster());
  json basis = json::array();
  json simplices = json::array();
  for (Eigen::Index c = 0; c < kernel.basis.cols(); ++c) {
    const Eigen::VectorXd alpha = kernel.basis.col(c);
    basis.push_back(io::to_json(alpha));
    simplices.push_back(io::to_json(from_alpha(alpha, tol.eps_w)));
  }
  out.results = {{"dimension", kernel.dimension()},
                 {"constraint_count", kernel.constraint_count},
                 {"basis", basis},
                 {"simplices", simplices}};
  if (points.p() > 0.0 && points.p() < 2.0) {
    const LpStrictness strict = strict_p_negtype_lp(points, tol.cluster(), tol.eig());
    out.results["strict"] = strict.strict;
    out.results["eigen"] = io::to_json(strict.eigen);
    out.results["agrees"] = strict.agrees;
  } else {
    out.results["strict"] = nullptr;
    out.results["eigen"] = nullptr;
    out.results["agrees"] = nullptr;
  }
  return out;
}

Outcome cmd_hilbert(const std::string& file, const Tolerances& tol) {
  const auto sf = load_simplex(file, tol);
  const LpPointSet& points = require_points(sf, "hilbert");
  Outcome out;
  out.inputs = {{"simplex_file", file}, {"p", points.p()}};
  const Gamma2Identity identity = gamma2_identity(sf.simplex, points);
  const TwoPolygonalClass cls = classify_2_polygonal(sf.simplex, points, tol.eps_c);
  const Hilbert2Strictness strict = strict_2_negtype(points, tol.eig());
  out.results = {{"identity",
                  {{"lhs", identity.lhs},
                   {"gap", identity.gap},
                   {"difference", identity.lhs - identity.gap}}},
                 {"classification",
                  {{"gap_zero", cls.gap_zero},
                   {"balanced", cls.balanced},
                   {"gap", cls.gap},
                   {"defect_norm", cls.defect_norm},
                   {"gap_tolerance", cls.gap_tolerance}}},
                 {"universe_strict", strict.strict},
                 {"universe_eigen", io::to_json(strict.eigen)}};
  return out;
}

Outcome cmd_affine(const std::string& file, const Tolerances& tol) {
  const auto points = io::points_from_json(io::read_json_file(file), tol.eps_c);
  Outcome out;
  out.inputs = {{"points_file", file}, {"p", points.p()}, {"points", points.size()}};
  const Hilbert2Strictness strict = strict_2_negtype(points, tol.eig());
  out.results = {{"affine", io::to_json(strict.affine)},
                 {"strict", strict.strict},
                 {"eigen", io::to_json(strict.eigen)},
                 {"agrees", strict.agrees}};
  if (strict.affine.dependency) {
    const SignedSimplex simplex =
        balanced_simplex_from_dependency(points, *strict.affine.dependency, tol.eps_c);
    const TwoPolygonalClass cls = classify_2_polygonal(simplex, points, tol.eps_c);
    out.results["simplex"] = io::to_json(simplex);
    out.results["gap"] = cls.gap;
    out.results["gap_tolerance"] = cls.gap_tolerance;
  } else {
    out.results["simplex"] = nullptr;
    out.results["gap"] = nullptr;
    out.results["gap_tolerance"] = nullptr;
  }
  return out;
}

Outcome cmd_elsner(const std::string& file, std::optional<double> p_flag, const Tolerances& tol) {
  const io::Families families = io::families_from_json(io::read_json_file(file));
  const double p = p_flag ? *p_flag : families.p.value_or(1.0);
  Outcome out;
  out.inputs = {{"families_file", file}, {"p", p}, {"family_size", families.xs.size()}};
  out.results = io::to_json(elsner_identity_check(families.xs, families.ys, p, tol.eps_c));
  return out;
}

Eigen::VectorXd as_vector(const std::vector<double>& values, std::initializer_list<double> fallback) {
  const std::vector<double> chosen = values.empty() ? std::vector<double>(fallback) : values;
  return Eigen::Map<const Eigen::VectorXd>(chosen.data(), static_cast<Eigen::Index>(chosen.size()));
}

json unit_side(std::initializer_list<std::size_t> ids) {
  json out = json::array();
  for (auto id : ids) out.push_back({{"id", id}, {"w", 1.0}});
  return out;
}

Outcome cmd_construct(const ConstructFlags& flags, const Tolerances& tol) {
  const fs::path dir(flags.out_dir);
  Outcome out;
  out.inputs = {{"kind", flags.kind}, {"out_dir", flags.out_dir}};
  json files = json::array();
  auto emit = [&](const std::string& suffix, const json& doc) {
    const std::string name = flags.kind + "." + suffix + ".json";
    io::write_json_file(dir / name, doc);
    files.push_back(name);
    return name;
  };
  auto emit_points_and_simplex = [&](const LpPointSet& points, const json& x, const json& y) {
    const std::string points_name = emit("points", io::points_to_json(points));
    emit("simplex", {{"universe", points_name}, {"x", x}, {"y", y}});
  };

  if (flags.kind == "parallelogram") {
    const Eigen::VectorXd u = as_vector(flags.u, {1.0, 0.0});
    const Eigen::VectorXd v = as_vector(flags.v, {0.0, 1.0});
    if (u.size() != v.size()) throw std::invalid_argument("--u and --v differ in length");
    Eigen::MatrixXd coords(4, u.size());
    coords.row(0).setZero();
    coords.row(1) = (u + v).transpose();
    coords.row(2) = u.transpose();
    coords.row(3) = v.transpose();
    out.inputs.update({{"p", flags.p}, {"u", io::to_json(u)}, {"v", io::to_json(v)}});
    emit_points_and_simplex(LpPointSet(flags.p, coords, tol.eps_c), unit_side({0, 1}),
                            unit_side({2, 3}));
  } else if (flags.kind == "counterexample4") {
    Eigen::MatrixXd coords(4, 2);
    coords << 0, 0, 1, 1, 3, 1, 2, 0;
    out.inputs["p"] = flags.p;
    emit_points_and_simplex(LpPointSet(flags.p, coords, tol.eps_c), unit_side({0, 2}),
                            unit_side({1, 3}));
  } else if (flags.kind == "vds-pair") {
    const Eigen::VectorXd u = as_vector(flags.u, {1.0, 1.0, 0.0});
    const Eigen::VectorXd v = as_vector(flags.v, {0.0, 1.0, 1.0});
    const VdsPair pair = construct_vds_pair(u, v, flags.p, tol.eps_c, tol.cluster());
    Eigen::MatrixXd generators(2, u.size());
    generators.row(0) = u.transpose();
    generators.row(1) = v.transpose();
    out.inputs.update({{"p", flags.p}, {"u", io::to_json(u)}, {"v", io::to_json(v)}});
    emit("generators", io::points_to_json(LpPointSet(flags.p, generators, 0.0)));
    emit_points_and_simplex(pair.points, unit_side({0, 1, 2}), unit_side({3, 4, 5}));
    out.results["kappa"] = pair.kappa;
    out.results["virtually_degenerate"] = pair.report.virtually_degenerate;
  } else if (flags.kind == "infvds") {
    const InfVdsBasis basis = infvds_basis(flags.count, flags.dims, flags.p);
    out.inputs.update({{"p", flags.p}, {"count", flags.count}, {"dims", flags.dims}});
    emit("points", io::points_to_json(basis.points));
    json pairs = json::array();
    for (const auto& pr : basis.pairs) {
      pairs.push_back({{"first", pr.first},
                       {"second", pr.second},
                       {"hypotheses", io::to_json(pr.hypotheses)},
                       {"kappa_is_one", pr.kappa_is_one},
                       {"simplex_virtually_degenerate", pr.simplex_virtually_degenerate}});
    }
    out.results["pairs"] = pairs;
    out.results["all_pairs_intersect"] = basis.all_pairs_intersect;
    out.results["all_pairs_satisfy_hypotheses"] = basis.all_pairs_satisfy_hypotheses;
  } else if (flags.kind == "cycle") {
    const std::size_t n = flags.n.value_or(4);
    out.inputs["n"] = n;
    emit("metric", io::metric_to_json(cycle_metric(n)));
  } else if (flags.kind == "ultrametric") {
    const std::size_t n = flags.n.value_or(6);
    out.inputs.update({{"n", n}, {"seed", flags.seed}});
    emit("metric", io::metric_to_json(random_ultrametric(n, flags.seed)));
  } else {
    throw std::invalid_argument("unknown kind: " + flags.kind);
  }
  out.results["kind"] = flags.kind;
  out.results["files"] = files;
  return out;
}

void report_error(std::ostream& err, const std::string& command, const char* kind,
                  const std::string& message, json violations = nullptr) {
  json doc = {{"command", command},
              {"error", {{"kind", kind}, {"message", message}}},
              {"version", kVersion}};
  if (!violations.is_null()) doc["error"]["violations"] = violations;
  err << doc.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negative type, roundness and polygonal equalities of finite metric spaces"};
  app.name("polyeq");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Tolerances tol;
  std::string file;
  std::optional<double> p_opt;
  double p_witness = 1.0;
  bool expect_witness = false;
  ConstructFlags construct;

  std::vector<std::pair<CLI::App*, std::function<Outcome()>>> commands;
  auto add = [&](const char* name, const char* help, const char* file_help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    if (file_help) cmd->add_option("file", file, file_help)->required();
    add_tolerance_flags(cmd, tol);
    return cmd;
  };

  auto* roundness = add("roundness", "generalized roundness by bisection", "metric file");
  commands.emplace_back(roundness, [&] { return cmd_roundness(file, tol); });

  auto* witness = add("witness", "equality witnesses at one exponent", "metric file");
  witness->add_option("--p", p_witness, "exponent")->capture_default_str();
  witness->add_flag("--expect-witness", expect_witness, "exit 1 when no witness exists");
  commands.emplace_back(witness, [&] { return cmd_witness(file, p_witness, expect_witness, tol); });

  auto* gap = add("gap", "simplex gap", "simplex file");
  gap->add_option("--p", p_opt, "exponent (default: point-set p, or 1 for metrics)");
  commands.emplace_back(gap, [&] { return cmd_gap(file, p_opt, tol); });

  auto* refine = add("refine", "complete refinement", "simplex file");
  commands.emplace_back(refine, [&] { return cmd_refine(file, tol); });

  auto* vd_check = add("vd-check", "per-coordinate virtual degeneracy", "simplex file");
  commands.emplace_back(vd_check, [&] { return cmd_vd_check(file, tol); });

  auto* vd_solve = add("vd-solve", "kernel of virtually degenerate weightings", "point-set file");
  commands.emplace_back(vd_solve, [&] { return cmd_vd_solve(file, tol); });

  auto* hilbert = add("hilbert", "Euclidean gap identity and classification", "simplex file");
  commands.emplace_back(hilbert, [&] { return cmd_hilbert(file, tol); });

  auto* affine = add("affine", "affine dependence and strict 2-negative type", "point-set file");
  commands.emplace_back(affine, [&] { return cmd_affine(file, tol); });

  auto* elsner = add("elsner", "numerical-set identity for two families", "families file");
  elsner->add_option("--p", p_opt, "exponent (default: file p, or 1)");
  commands.emplace_back(elsner, [&] { return cmd_elsner(file, p_opt, tol); });

  auto* con = add("construct", "write named fixtures", nullptr);
  con->add_option("--kind", construct.kind, "fixture kind")
      ->required()
      ->check(CLI::IsMember(
          {"parallelogram", "counterexample4", "vds-pair", "infvds", "cycle", "ultrametric"}));
  con->add_option("--out-dir", construct.out_dir, "output directory")->capture_default_str();
  con->add_option("--p", construct.p, "exponent of emitted point sets")->capture_default_str();
  con->add_option("--u", construct.u, "first vector, comma separated")->delimiter(',');
  con->add_option("--v", construct.v, "second vector, comma separated")->delimiter(',');
  con->add_option("--count", construct.count, "infvds: number of basis vectors")
      ->capture_default_str();
  con->add_option("--dims", construct.dims, "infvds: truncation length")->capture_default_str();
  con->add_option("--n", construct.n, "cycle/ultrametric: number of points");
  con->add_option("--seed", construct.seed, "ultrametric: RNG seed")->capture_default_str();
  commands.emplace_back(con, [&] { return cmd_construct(construct, tol); });

  std::vector<std::string> argv_store{"polyeq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  for (const auto& [cmd, handler] : commands) {
    if (!cmd->parsed()) continue;
    const std::string name = cmd->get_name();
    try {
      Outcome outcome = handler();
      const json report = {{"command", name},
                           {"inputs", outcome.inputs},
                           {"results", outcome.results},
                           {"tolerances", tol.to_json()},
                           {"version", kVersion}};
      out << report.dump(2) << '\n';
      return outcome.code;
    } catch (const MetricError& e) {
      json violations = json::array();
      for (const auto& v : e.violations()) {
        violations.push_back({{"axiom", axiom_name(v.axiom)},
                              {"i", v.i},
                              {"j", v.j},
                              {"via", v.via},
                              {"description", v.describe()}});
      }
      report_error(err, name, "input", e.what(), violations);
      return kInputError;
    } catch (const std::invalid_argument& e) {
      report_error(err, name, "input", e.what());
      return kInputError;
    } catch (const std::out_of_range& e) {
      report_error(err, name, "input", e.what());
      return kInputError;
    } catch (const json::exception& e) {
      report_error(err, name, "input", e.what());
      return kInputError;
    } catch (const fs::filesystem_error& e) {
      report_error(err, name, "input", e.what());
      return kInputError;
    } catch (const std::exception& e) {
      report_error(err, name, "numeric", e.what());
      return kNumericFailure;
    }
  }
  return kInputError;
}

}  // namespace polyeq::cli
