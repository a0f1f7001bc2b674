#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kahler/comparison.hpp"
#include "kahler/errors.hpp"
#include "kahler/io.hpp"
#include "kahler/model_space.hpp"
#include "kahler/series.hpp"
#include "kahler/sphere_quadrature.hpp"

namespace kahler::cli {

using nlohmann::json;

namespace {

constexpr int kHolds = 0;
constexpr int kUsage = 1;
constexpr int kViolated = 2;
constexpr int kInconclusive = 3;

}  // namespace

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::holds: return kHolds;
    case Verdict::violated: return kViolated;
    case Verdict::inconclusive: return kInconclusive;
  }
  return kUsage;
}

namespace {

template <class T>
json opt(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

struct Source {
  std::shared_ptr<const KahlerMetricField> field;
  json spec;
  std::optional<CatalogId> id;
  std::optional<LambdaSearch> lambda;
};

double param(const CatalogId& id, const std::string& key, double fallback) {
  const auto it = id.params.find(key);
  return it == id.params.end() ? fallback : it->second;
}

Source resolve(const RunConfig& cfg, bool search_lambda) {
  if (!cfg.potential_file.empty() && !cfg.catalog.empty())
    throw ValidationError("--potential and --catalog are mutually exclusive");
  Source s;
  if (!cfg.potential_file.empty()) {
    const RealAnalyticPotential pot = io::load_potential(cfg.potential_file);
    s.spec = io::potential_to_json(pot);
    s.field = make_field(pot);
    return s;
  }
  CatalogId id = io::parse_catalog(cfg.catalog.empty() ? "flat" : cfg.catalog);
  if (id.name == "perturbed" && !id.params.count("seed")) id.params["seed"] = static_cast<double>(cfg.seed);
  if (id.name == "section6" && !id.params.count("lambda")) {
    if (!search_lambda) throw ValidationError("section6 needs lambda");
    LambdaOptions lo;
    lo.certify.threads = cfg.threads;
    s.lambda = find_lambda(param(id, "a", 0.1), cfg.rho, lo);
    id.params["a"] = param(id, "a", 0.1);
    id.params["lambda"] = s.lambda->lambda;
  }
  if (id.name == "space_form") {
    // The closed-form field avoids the polynomial truncation of the logarithm.
    const double K = id.params.count("K") ? id.params.at("K") : throw ValidationError("space_form needs K");
    s.field = std::make_shared<SpaceFormMetricField>(static_cast<int>(param(id, "n", 2)), K);
  } else {
    s.field = make_field(catalog::by_id(id));
  }
  json c = {{"name", id.name}};
  for (const auto& [k, v] : id.params) c[k] = v;
  s.spec = {{"catalog", c}};
  s.id = id;
  return s;
}

double resolve_K(const RunConfig& cfg, const Source& s) {
  if (cfg.K) return *cfg.K;
  if (s.id) {
    if (s.id->name == "flat") return 0.0;
    if (s.id->name == "space_form") return s.id->params.at("K");
    if (s.id->name == "section6") return -12.0 * s.id->params.at("a");
  }
  throw ValidationError("--K is required for this potential");
}

Eigen::VectorXcd resolve_point(const RunConfig& cfg, int n) {
  if (cfg.point.empty()) return Eigen::VectorXcd::Zero(n);
  if (static_cast<int>(cfg.point.size()) != 2 * n)
    throw ValidationError("--point needs " + std::to_string(2 * n) + " real coordinates");
  return to_holomorphic(Eigen::Map<const Eigen::VectorXd>(cfg.point.data(), 2 * n));
}

std::vector<double> linear_grid(const RunConfig& cfg, double lo, double hi, int steps) {
  const double a = cfg.r_min.value_or(lo), b = cfg.r_max.value_or(hi);
  const int m = cfg.r_steps.value_or(steps);
  if (!(a > 0.0) || !(b >= a) || m < 1) throw ValidationError("radius grid needs 0 < r-min <= r-max and r-steps >= 1");
  std::vector<double> r(m);
  for (int k = 0; k < m; ++k) r[k] = m == 1 ? a : a + (b - a) * k / (m - 1);
  return r;
}

template <class F>
std::string csv(F&& write) {
  std::ostringstream s;
  write(s);
  return s.str();
}

json header(const RunConfig& cfg, const Source& s) {
  json j = {{"command", cfg.command}, {"potential", s.spec}};
  if (!cfg.which.empty()) j["check"] = cfg.which;
  if (s.lambda) j["lambda_search"] = io::to_json(*s.lambda);
  return j;
}

}  // namespace

json to_json(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"check", cfg.which},    {"potential", cfg.potential_file},
          {"catalog", cfg.catalog},  {"n", cfg.n},            {"K", opt(cfg.K)},
          {"r_min", opt(cfg.r_min)}, {"r_max", opt(cfg.r_max)}, {"r_steps", opt(cfg.r_steps)},
          {"order", cfg.order},      {"tol", opt(cfg.tol)},   {"ode_tol", cfg.ode_tol},
          {"rho", cfg.rho},          {"point", cfg.point},    {"out", cfg.out},
          {"seed", cfg.seed},        {"threads", cfg.threads}};
}

Outputs cmd_model(const RunConfig& cfg) {
  const ModelSpace model(cfg.n, cfg.K.value_or(0.0));
  const std::vector<double> radii = linear_grid(cfg, 0.01, 0.5, 50);
  Outputs o;
  o.tables["model"] = csv([&](std::ostream& s) { write_model_table(model, radii, s); });
  o.report = {{"command", "model"}, {"n", model.n}, {"K", model.K}, {"radii", radii.size()}};
  if (model.K > 0) o.report["conjugate_radius"] = model.conjugate_radius();
  return o;
}

Outputs cmd_series(const RunConfig& cfg) {
  const Source src = resolve(cfg, true);
  const int n = src.field->n();
  const Eigen::VectorXcd p = resolve_point(cfg, n);
  if (cfg.order < 0 || cfg.order > 6) throw ValidationError("--order must be in [0, 6] for series");
  const SphereRule rule = build_rule(n, default_rule_degree(n));

  const Eigen::VectorXd e0 = tangent_isometry(metric_at(*src.field, p).g).col(0);
  const SeriesExpansion dir = direction_series(src.field, p, e0, cfg.order);
  const SeriesExpansion avg = averaged_series(src.field, p, rule, cfg.order, cfg.threads);
  const C4Average c4 = c4_sphere_average(src.field, p, rule, cfg.threads);

  const double scale = std::min(src.field->validity_radius(), 0.1);
  const auto samples = sample_w(src.field, p, rule, geometric_grid(0.05 * scale, 0.8 * scale, 24), cfg.ode_tol,
                                cfg.threads);
  const auto check = sample_w(src.field, p, rule, geometric_grid(0.07 * scale, 0.7 * scale, 5), cfg.ode_tol,
                              cfg.threads);
  const SeriesExpansion fit = fit_w_series(samples, cfg.order + 4, check);

  const double K = cfg.K ? *cfg.K : (src.id ? resolve_K(cfg, src) : c4.K);
  const SeriesExpansion model = model_series(ModelSpace(n, K), std::max(cfg.order, 2));

  Outputs o;
  o.report = header(cfg, src);
  o.report["point"] = io::complex_vector(p);
  o.report["order"] = cfg.order;
  o.report["K"] = K;
  o.report["direction"] = io::series_to_json(dir);
  o.report["direction"]["e0"] = io::real_vector(e0);
  o.report["averaged"] = io::series_to_json(avg);
  o.report["fitted"] = io::series_to_json(fit);
  o.report["model"] = io::series_to_json(model);
  o.report["c4_average"] = {{"value", c4.value}, {"einstein", c4.einstein}, {"K", c4.K}, {"warning", c4.warning}};
  o.tables["series"] = csv([&](std::ostream& s) {
    s << "k,direction,averaged,fitted,model\n";
    for (int k = 0; k <= cfg.order; ++k)
      s << k << ',' << io::format_number(dir[k]) << ',' << io::format_number(avg[k]) << ','
        << io::format_number(fit[k]) << ',' << io::format_number(model[k]) << '\n';
  });
  return o;
}

Outputs cmd_check(const RunConfig& cfg) {
  Outputs o;
  if (cfg.which == "counterexample") {
    if (!cfg.potential_file.empty()) throw ValidationError("counterexample runs on the section6 catalog entry");
    RunConfig c = cfg;
    if (c.catalog.empty()) c.catalog = "section6:a=0.1";
    if (io::parse_catalog(c.catalog).name != "section6")
      throw ValidationError("counterexample runs on the section6 catalog entry");
    const Source src = resolve(c, true);
    CounterexampleOptions opts;
    opts.radii = geometric_grid(cfg.r_min.value_or(5e-4), cfg.r_max.value_or(0.04), cfg.r_steps.value_or(24));
    opts.ode_tol = cfg.ode_tol;
    opts.certify_options.threads = cfg.threads;
    const CounterexampleReport rep = verify_counterexample(src.id->params.at("a"), src.id->params.at("lambda"), opts);
    o.report = header(c, src);
    o.report["result"] = io::to_json(rep);
    o.tables["pointwise"] = csv([&](std::ostream& s) { io::write_pointwise_csv(rep, s); });
    if (rep.all_passed()) {
      o.exit_code = kHolds;
    } else {
      // Only the numerical stage failing means the margin did not clear the budget.
      bool only_numeric = true;
      for (std::size_t i = 0; i + 1 < rep.stages.size(); ++i) only_numeric = only_numeric && rep.stages[i].passed;
      o.exit_code = only_numeric ? kInconclusive : kViolated;
    }
    o.report["verdict"] = o.exit_code == kHolds ? "holds" : (o.exit_code == kViolated ? "violated" : "inconclusive");
    return o;
  }

  const Source src = resolve(cfg, true);
  const double K = resolve_K(cfg, src);
  const Eigen::VectorXcd p = resolve_point(cfg, src.field->n());
  CheckOptions opts;
  opts.tol = cfg.tol.value_or(0.0);
  opts.ode_tol = cfg.ode_tol;
  opts.threads = cfg.threads;
  o.report = header(cfg, src);

  if (cfg.which == "rigidity") {
    const RigidityReport rep = rigidity_probe(src.field, K, p, cfg.order, opts);
    o.report["result"] = io::to_json(rep);
    o.tables["rigidity"] = csv([&](std::ostream& s) { io::write_rigidity_csv(rep, s); });
    return o;
  }
  if (cfg.which != "thm3" && cfg.which != "thm4") throw ValidationError("unknown check '" + cfg.which + "'");

  CertifyOptions co;
  co.threads = cfg.threads;
  const RicciBoundCertificate cert = certify_ricci_bound(*src.field, K, cfg.rho, co);
  o.report["certificate"] = io::to_json(cert);
  const std::vector<double> radii = linear_grid(cfg, 0.005, 0.04, 8);
  ComparisonReport rep;
  if (cfg.which == "thm3") {
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t j = i + 1; j < radii.size(); ++j) pairs.emplace_back(radii[i], radii[j]);
    if (pairs.empty()) throw ValidationError("thm3 needs at least two radii");
    rep = check_volume_ratio(src.field, K, p, pairs, &cert, opts);
  } else {
    rep = check_average_laplacian(src.field, K, p, radii, &cert, opts);
  }
  o.report["result"] = io::to_json(rep);
  o.report["verdict"] = to_string(rep.verdict);
  o.tables[cfg.which] = csv([&](std::ostream& s) { io::write_rows_csv(rep, s); });
  o.exit_code = exit_code(rep.verdict);
  return o;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic sphere comparisons for Kahler potentials"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool potential) {
    if (potential) {
      sub->add_option("--potential", cfg.potential_file, "JSON potential spec")->check(CLI::ExistingFile);
      sub->add_option("--catalog", cfg.catalog, "catalog entry, e.g. section6:a=0.1,lambda=50");
      sub->add_option("--point", cfg.point, "base point as real coordinates x1 y1 x2 y2 ...")->delimiter(',');
      sub->add_option("--rho", cfg.rho, "radius of the certified ball")->check(CLI::PositiveNumber);
      sub->add_option("--ode-tol", cfg.ode_tol, "ODE tolerance")->check(CLI::PositiveNumber);
    }
    sub->add_option("--K", cfg.K, "Ricci lower bound / model constant");
    sub->add_option("--r-min", cfg.r_min, "smallest radius");
    sub->add_option("--r-max", cfg.r_max, "largest radius");
    sub->add_option("--r-steps", cfg.r_steps, "number of radii");
    sub->add_option("--out", cfg.out, "output directory (report.json, tables/, config.echo.json)");
    sub->add_option("--seed", cfg.seed, "seed for randomized catalog entries");
    sub->add_option("--threads", cfg.threads, "worker cap; 0 uses available parallelism")->check(CLI::NonNegativeNumber);
  };

  CLI::App* model = app.add_subcommand("model", "closed-form model space table");
  common(model, false);
  model->add_option("--n", cfg.n, "complex dimension")->check(CLI::PositiveNumber);

  CLI::App* series = app.add_subcommand("series", "W(r) coefficients: per direction, averaged, fitted, model");
  common(series, true);
  series->add_option("--order", cfg.order, "highest power of r");

  CLI::App* check = app.add_subcommand("check", "run a comparison check");
  common(check, true);
  check->add_option("which", cfg.which, "thm3 | thm4 | counterexample | rigidity")
      ->required()
      ->check(CLI::IsMember({"thm3", "thm4", "counterexample", "rigidity"}));
  check->add_option("--order", cfg.order, "rigidity probe order");
  check->add_option("--tol", cfg.tol, "margin tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Outputs o;
  try {
    if (cfg.command == "model") o = cmd_model(cfg);
    else if (cfg.command == "series") o = cmd_series(cfg);
    else o = cmd_check(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string report = o.report.dump(2) + "\n";
  if (cfg.out.empty()) {
    if (cfg.command == "model") out << o.tables.at("model");
    else out << report;
    return o.exit_code;
  }
  try {
    const std::filesystem::path dir(cfg.out);
    io::write_text(dir / "report.json", report);
    io::write_text(dir / "config.echo.json", to_json(cfg).dump(2) + "\n");
    for (const auto& [name, text] : o.tables) io::write_text(dir / "tables" / (name + ".csv"), text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return o.exit_code;
}

}  // namespace kahler::cli
