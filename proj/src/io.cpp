#include "kahler/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kahler/errors.hpp"

namespace kahler::io {

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::vector<int> read_index(const json& j, int n, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ValidationError(std::string("potential term: missing '") + key + "'");
  std::vector<int> out = j.at(key).get<std::vector<int>>();
  if (static_cast<int>(out.size()) != n)
    throw ValidationError(std::string("potential term: '") + key + "' must have " + std::to_string(n) + " entries");
  return out;
}

std::string index_label(int i, int j, int k, int l) {
  std::ostringstream s;
  s << "R_{" << i + 1 << ' ' << j + 1 << "bar " << k + 1 << ' ' << l + 1 << "bar}";
  return s.str();
}

json complex_matrix(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(complex_vector(m.row(i).transpose()));
  return rows;
}

json real_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(real_vector(m.row(i).transpose()));
  return rows;
}

}  // namespace

json potential_to_json(const RealAnalyticPotential& pot, bool prefer_catalog) {
  if (prefer_catalog && pot.catalog_id()) {
    json c = {{"name", pot.catalog_id()->name}};
    for (const auto& [k, v] : pot.catalog_id()->params) c[k] = v;
    return {{"catalog", c}};
  }
  json terms = json::array();
  for (const Monomial& m : pot.terms())
    terms.push_back({{"alpha", m.alpha}, {"beta", m.beta}, {"re", m.coeff.real()}, {"im", m.coeff.imag()}});
  return {{"n", pot.n()}, {"max_degree", pot.max_degree()}, {"validity_radius", pot.validity_radius()},
          {"terms", terms}};
}

RealAnalyticPotential potential_from_json(const json& spec) {
  try {
    if (spec.contains("catalog")) {
      const json& c = spec.at("catalog");
      CatalogId id{c.at("name").get<std::string>(), {}};
      for (const auto& [k, v] : c.items())
        if (k != "name") id.params[k] = v.get<double>();
      return catalog::by_id(id);
    }
    const int n = spec.at("n").get<int>();
    if (n < 1) throw ValidationError("potential: n must be positive");
    const int max_degree = spec.at("max_degree").get<int>();
    const double radius = spec.value("validity_radius", 0.1);
    std::vector<Monomial> terms;
    for (const json& t : spec.at("terms"))
      terms.push_back({read_index(t, n, "alpha"), read_index(t, n, "beta"),
                       {t.value("re", 0.0), t.value("im", 0.0)}});
    return RealAnalyticPotential(n, std::move(terms), max_degree, radius);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("potential spec: ") + e.what());
  }
}

RealAnalyticPotential load_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file " + path.string());
  try {
    return potential_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ValidationError("potential file " + path.string() + ": " + e.what());
  }
}

CatalogId parse_catalog(const std::string& text) {
  CatalogId id;
  const auto colon = text.find(':');
  id.name = text.substr(0, colon);
  if (id.name.empty()) throw ValidationError("catalog: empty name");
  if (colon == std::string::npos) return id;
  std::istringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("catalog: expected key=value, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ValidationError("catalog: bad number '" + value + "'");
    id.params[item.substr(0, eq)] = x;
  }
  return id;
}

json complex_vector(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({number(v[i].real()), number(v[i].imag())});
  return out;
}

json real_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json curvature_to_json(const CurvatureTensor& tensor) {
  const int n = tensor.components.n();
  json comps = json::object();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const auto c = tensor.components(i, j, k, l);
          comps[index_label(i, j, k, l)] = {number(c.real()), number(c.imag())};
        }
  return {{"point", complex_vector(tensor.metric.point)},
          {"g", complex_matrix(tensor.metric.g)},
          {"ricci", complex_matrix(ricci_at(tensor))},
          {"scalar", number(scalar_at(tensor))},
          {"components", comps}};
}

json series_to_json(const SeriesExpansion& s) {
  json out = {{"provenance", s.provenance}, {"coefficients", json::array()}};
  for (double c : s.coefficients) out["coefficients"].push_back(number(c));
  if (s.provenance == "fitted") {
    out["condition_number"] = number(s.condition_number);
    out["cross_validation_residual"] = number(s.cross_validation_residual);
    json sd = json::array();
    for (Eigen::Index i = 0; i < s.covariance.rows(); ++i) sd.push_back(number(std::sqrt(s.covariance(i, i))));
    out["standard_errors"] = sd;
  }
  return out;
}

json jacobi_to_json(const JacobiCoefficients& c) {
  json a = json::array();
  for (const auto& m : c.A) a.push_back(real_matrix(m));
  return {{"e0", real_vector(c.e0)}, {"order", c.order}, {"A", a}};
}

json to_json(const RicciBoundCertificate& c) {
  return {{"potential", c.potential_id}, {"K", c.K},
          {"rho", c.rho},                {"min_eigenvalue", number(c.min_eigenvalue)},
          {"witness", complex_vector(c.witness)}, {"samples", c.samples},
          {"valid", c.valid}};
}

json to_json(const LambdaSearch& s) {
  json trace = json::array();
  for (const auto& t : s.trace)
    trace.push_back({{"lambda", t.lambda}, {"min_eigenvalue", number(t.min_eigenvalue)}, {"passed", t.passed}});
  return {{"lambda", s.lambda}, {"trace", trace}, {"certificate", to_json(s.certificate)}};
}

json to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"r", row.r}, {"lhs", number(row.lhs)}, {"rhs", number(row.rhs)}, {"margin", number(row.margin)}};
    if (r.relative) j["a"] = row.a;
    rows.push_back(j);
  }
  return {{"check", r.check},       {"metric", r.metric_id}, {"K", r.K},
          {"point", complex_vector(r.point)}, {"verdict", to_string(r.verdict)}, {"tol", r.tol},
          {"relative", r.relative}, {"notes", r.notes},     {"rows", rows}};
}

json to_json(const CounterexampleReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    json values = json::object();
    for (const auto& [k, v] : s.values) values[k] = number(v);
    stages.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}, {"values", values}});
  }
  json out = {{"a", r.a},
              {"lambda", r.lambda},
              {"stages", stages},
              {"interval", {r.interval_lo, r.interval_hi}},
              {"all_passed", r.all_passed()}};
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  return out;
}

json to_json(const RigidityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"order", row.order},
                    {"fitted", number(row.fitted)},
                    {"model", number(row.model)},
                    {"deviation", number(row.deviation)},
                    {"threshold", number(row.threshold)}});
  return {{"metric", r.metric_id},
          {"K", r.K},
          {"rows", rows},
          {"first_deviation", r.first_deviation},
          {"sign", r.sign},
          {"statement", r.statement}};
}

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_rows_csv(const ComparisonReport& r, std::ostream& out) {
  out << (r.relative ? "a,b,lhs,rhs,margin\n" : "r,lhs,rhs,margin\n");
  for (const auto& row : r.rows) {
    if (r.relative) out << format_number(row.a) << ',';
    out << format_number(row.r) << ',' << format_number(row.lhs) << ',' << format_number(row.rhs) << ','
        << format_number(row.margin) << '\n';
  }
}

void write_pointwise_csv(const CounterexampleReport& r, std::ostream& out) {
  out << "r,laplacian,model,margin,budget\n";
  for (const auto& row : r.pointwise)
    out << format_number(row.r) << ',' << format_number(row.laplacian) << ',' << format_number(row.model) << ','
        << format_number(row.margin) << ',' << format_number(row.budget) << '\n';
}

void write_rigidity_csv(const RigidityReport& r, std::ostream& out) {
  out << "order,fitted,model,deviation,threshold\n";
  for (const auto& row : r.rows)
    out << row.order << ',' << format_number(row.fitted) << ',' << format_number(row.model) << ','
        << format_number(row.deviation) << ',' << format_number(row.threshold) << '\n';
}

void write_lambda_trace_csv(const LambdaSearch& s, std::ostream& out) {
  out << "lambda,min_eigenvalue,passed\n";
  for (const auto& t : s.trace)
    out << format_number(t.lambda) << ',' << format_number(t.min_eigenvalue) << ',' << (t.passed ? 1 : 0) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

}  // namespace kahler::io
