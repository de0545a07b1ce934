#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ehencky/constitutive.hpp"
#include "ehencky/convexity.hpp"
#include "ehencky/elastostatics.hpp"
#include "ehencky/errors.hpp"
#include "ehencky/report_io.hpp"
#include "ehencky/sampling.hpp"

namespace ehencky::cli {

namespace {

struct RunConfig {
  double mu = 1.0;
  double kappa = 1.0;
  double k = 0.25;
  double k_hat = 0.125;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 100000;
  std::string out;

  MaterialParams params() const { return {mu, kappa, k, k_hat}; }
};

std::string fmt_double(double x) {
  if (std::isinf(x)) {
    return x > 0 ? "+inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  f << content;
  return static_cast<bool>(f);
}

// --- eval -------------------------------------------------------------------------

int cmd_eval(const RunConfig& cfg, const std::vector<double>& entries, std::ostream& out,
             std::ostream& err) {
  if (entries.size() != 4) {
    err << "error: eval needs exactly 4 matrix entries (a11 a12 a21 a22)\n";
    return kUsage;
  }
  const Mat2 f{entries[0], entries[1], entries[2], entries[3]};
  if (!f.is_finite()) {
    err << "error: matrix entries must be finite\n";
    return kUsage;
  }
  const MaterialParams p = cfg.params();
  const EnergyValue w = energy(p, f);
  out << "value " << fmt_double(w.value) << '\n';
  if (!w.is_finite()) {
    out << "status " << (w.status == EnergyStatus::overflow ? "overflow" : "not_admissible") << '\n';
    return kOk;
  }
  out << "iso_part " << fmt_double(w.iso_part) << '\n';
  out << "vol_part " << fmt_double(w.vol_part) << '\n';
  const Mat2 s = pk1_stress(p, f);
  out << "S1 " << fmt_double(s.a11) << ' ' << fmt_double(s.a12) << ' ' << fmt_double(s.a21) << ' '
      << fmt_double(s.a22) << '\n';
  return kOk;
}

// --- curve-y ------------------------------------------------------------------------

int cmd_curve_y(const RunConfig& cfg, const std::vector<double>& ks, double theta_max,
                std::size_t n_points, std::ostream& out, std::ostream& err) {
  if (!(theta_max > 1.0) || n_points < 2 || ks.empty()) {
    err << "error: curve-y needs theta-max > 1, points >= 2 and at least one k\n";
    return kUsage;
  }
  for (double k : ks) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      err << "error: every k must be > 0\n";
      return kUsage;
    }
  }
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ostringstream summary;
  summary << "k,file,convex,theta_lo,theta_hi,theta_worst\n";
  for (double k : ks) {
    const ScalarCurve curve = make_y_curve(k, theta_max, n_points);
    const std::string name = "y_k" + fmt_short(k) + ".csv";
    if (!write_file((dir / name).string(), curve_to_csv(curve), err)) {
      return kUsage;
    }
    const auto neg = negative_curvature_interval(curve);
    summary << fmt_short(k) << ',' << name << ',' << (neg ? "false" : "true") << ',';
    if (neg) {
      summary << fmt_double(neg->theta_lo) << ',' << fmt_double(neg->theta_hi) << ','
              << fmt_double(neg->theta_worst);
    } else {
      summary << ",,";
    }
    summary << '\n';
  }
  if (!write_file((dir / "curve_y_summary.csv").string(), summary.str(), err)) {
    return kUsage;
  }
  out << summary.str();
  return kOk;
}

// --- certify ------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"rank-one",   "polyconvex-witness", "von-neumann", "lambda-max",
                                              "coercivity", "volumetric",         "all"};
  return names;
}

std::vector<ScanReport> run_suite(const std::string& suite, const RunConfig& cfg) {
  const MaterialParams p = cfg.params();
  const std::uint64_t n = cfg.samples;
  std::vector<ScanReport> reports;
  const bool all = suite == "all";
  if (all || suite == "rank-one") {
    reports.push_back(rank_one_scan(p, n, cfg.seed));
  }
  if (all || suite == "polyconvex-witness") {
    reports.push_back(polyconvex_midpoint_scan(p, n, cfg.seed));
    reports.push_back(witness_identity_scan(p, n, cfg.seed));
  }
  if (all || suite == "von-neumann") {
    reports.push_back(von_neumann_scan(n, cfg.seed));
    reports.push_back(von_neumann_max_scan(std::max<std::uint64_t>(1, n / 100), 1000, cfg.seed));
  }
  if (all || suite == "lambda-max") {
    reports.push_back(lambda_max_scan(n, cfg.seed, false));
    reports.push_back(lambda_max_scan(n, cfg.seed, true));
  }
  if (all || suite == "coercivity") {
    reports.push_back(coercivity_scan(p, {1.0, 2.0, 10.0}, coercivity_grid(p)));
  }
  if (all || suite == "volumetric") {
    reports.push_back(volumetric_scan(2, cfg.k_hat, -10.0, 10.0, 10001));
    reports.push_back(volumetric_scan(3, cfg.k_hat, -5.0, 5.0, 10001));
  }
  for (auto& r : reports) {
    r.seed = cfg.seed;
  }
  return reports;
}

int cmd_certify(const RunConfig& cfg, const std::string& suite, std::ostream& out, std::ostream& err) {
  const std::vector<ScanReport> reports = run_suite(suite, cfg);
  bool passed = true;
  nlohmann::ordered_json doc;
  doc["suite"] = suite;
  nlohmann::ordered_json params;
  params["mu"] = cfg.mu;
  params["kappa"] = cfg.kappa;
  params["k"] = cfg.k;
  params["k_hat"] = cfg.k_hat;
  doc["params"] = params;
  doc["seed"] = cfg.seed;
  doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed();
    doc["reports"].push_back(to_json(r));
  }
  doc["passed"] = passed;
  const std::string text = doc.dump(2) + "\n";
  if (!cfg.out.empty()) {
    if (!write_file(cfg.out, text, err)) {
      return kUsage;
    }
  }
  out << text;
  for (const auto& r : reports) {
    if (!r.passed()) {
      err << "violation: " << r.suite << " worst_margin " << fmt_double(r.worst_margin) << " < -"
          << fmt_double(r.tolerance) << '\n';
    }
  }
  return passed ? kOk : kPropertyViolated;
}

// --- solve ---------------------------------------------------------------------------

struct SolveArgs {
  std::string mesh = "8x8";
  std::vector<double> affine;
  std::optional<double> shear;
  double width = 1.0;
  double height = 1.0;
  double perturb = 0.0;
  double tol = 1e-10;
  int max_iter = 20000;
};

int cmd_solve(const RunConfig& cfg, const SolveArgs& a, std::ostream& out, std::ostream& err) {
  int nx = 0;
  int ny = 0;
  char sep = 0;
  std::istringstream ms(a.mesh);
  if (!(ms >> nx >> sep >> ny) || sep != 'x' || nx < 1 || ny < 1 || !ms.eof()) {
    err << "error: --mesh expects NXxNY, e.g. 8x8\n";
    return kUsage;
  }
  if (a.affine.empty() == !a.shear.has_value()) {
    err << "error: give exactly one of --affine a11 a12 a21 a22 or --shear gamma\n";
    return kUsage;
  }
  Mat2 f0 = Mat2::identity();
  if (!a.affine.empty()) {
    if (a.affine.size() != 4) {
      err << "error: --affine needs 4 entries\n";
      return kUsage;
    }
    f0 = {a.affine[0], a.affine[1], a.affine[2], a.affine[3]};
  } else {
    f0 = {1.0, *a.shear, 0.0, 1.0};
  }
  if (!f0.is_finite() || !(f0.det() > 0.0)) {
    err << "error: boundary data must satisfy det F0 > 0\n";
    return kUsage;
  }
  if (!(a.width > 0.0) || !(a.height > 0.0) || !(a.tol > 0.0) || a.max_iter < 0 || !(a.perturb >= 0.0)) {
    err << "error: invalid solver options\n";
    return kUsage;
  }

  const MaterialParams p = cfg.params();
  MeshState mesh = build_rect_mesh(nx, ny, a.width, a.height);
  if (!apply_dirichlet(mesh, affine_map(f0))) {
    err << "warning: affine extension of the boundary data is inadmissible; interior starts at identity\n";
  }
  if (a.perturb > 0.0) {
    std::vector<char> fixed(mesh.nodes.size(), 0);
    for (int i : mesh.boundary_nodes) {
      fixed[static_cast<std::size_t>(i)] = 1;
    }
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      if (!fixed[i]) {
        Rng rng = sample_rng(cfg.seed, i);
        const double dx = uniform(rng, -a.perturb, a.perturb);
        const double dy = uniform(rng, -a.perturb, a.perturb);
        mesh.deformed[i].x += dx;
        mesh.deformed[i].y += dy;
      }
    }
  }
  if (!std::isfinite(total_energy(p, mesh))) {
    err << "error: initial state is inadmissible (an element has det F <= 0)\n";
    return kUsage;
  }

  SolveOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  opts.record_history = false;
  const SolveResult res = minimize(p, mesh, opts);

  nlohmann::ordered_json j = to_json(res);
  j["affine_energy"] = a.width * a.height * energy_value(p, f0);
  const std::string prefix = cfg.out.empty() ? "solve" : cfg.out;
  std::ostringstream mesh_text;
  write_mesh(mesh_text, res.deformed);
  if (!write_file(prefix + ".json", j.dump(2) + "\n", err) || !write_file(prefix + ".mesh", mesh_text.str(), err)) {
    return kUsage;
  }
  out << j.dump(2) << '\n';
  switch (res.status) {
    case SolveStatus::converged:
      return kOk;
    case SolveStatus::no_descent:
      return kNoDescent;
    case SolveStatus::max_iterations:
      return kNotConverged;
  }
  return kNotConverged;
}

void add_material_flags(CLI::App& app, RunConfig& cfg) {
  auto positive = CLI::PositiveNumber;
  app.add_option("--mu", cfg.mu, "shear modulus")->check(positive);
  app.add_option("--kappa", cfg.kappa, "bulk modulus")->check(positive);
  app.add_option("--k", cfg.k, "isochoric exponent")->check(positive);
  app.add_option("--k-hat", cfg.k_hat, "volumetric exponent")->check(positive);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "number of random samples")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "output path (file, directory or prefix depending on the command)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponentiated Hencky energy toolkit: evaluation, convexity certification, elastostatics"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::vector<double> eval_entries;
  auto* eval = app.add_subcommand("eval", "energy and first Piola-Kirchhoff stress at F = [a11 a12; a21 a22]");
  eval->add_option("entries", eval_entries, "a11 a12 a21 a22")->expected(4)->required();

  std::vector<double> ks{0.125, 0.25, 0.5};
  double theta_max = 1000.0;
  std::size_t n_points = 1000;
  auto* curve = app.add_subcommand("curve-y", "emit Y(theta) = exp(k/2 log^2 theta) curves as CSV");
  curve->add_option("--k-values", ks, "values of k")->expected(1, -1);
  curve->add_option("--theta-max", theta_max, "upper end of the theta grid");
  curve->add_option("--points", n_points, "grid points per curve");

  std::string suite;
  auto* certify = app.add_subcommand("certify", "run convexity certification scans; exit 1 on violation");
  certify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "minimize the total energy on a rectangle with Dirichlet data");
  solve->add_option("--mesh", solve_args.mesh, "NXxNY cells");
  solve->add_option("--affine", solve_args.affine, "F0 entries a11 a12 a21 a22 (phi0(x) = F0 x)")->expected(4);
  solve->add_option("--shear", solve_args.shear, "simple shear amount gamma");
  solve->add_option("--width", solve_args.width, "domain width");
  solve->add_option("--height", solve_args.height, "domain height");
  solve->add_option("--perturb", solve_args.perturb, "random interior perturbation amplitude");
  solve->add_option("--tol", solve_args.tol, "relative gradient tolerance");
  solve->add_option("--max-iter", solve_args.max_iter, "iteration limit");

  for (CLI::App* sub : {eval, curve, certify, solve}) {
    add_material_flags(*sub, cfg);
  }

  std::vector<const char*> argv{"ehencky"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*eval) {
      return cmd_eval(cfg, eval_entries, out, err);
    }
    if (*curve) {
      return cmd_curve_y(cfg, ks, theta_max, n_points, out, err);
    }
    if (*certify) {
      return cmd_certify(cfg, suite, out, err);
    }
    if (*solve) {
      return cmd_solve(cfg, solve_args, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ehencky::cli
