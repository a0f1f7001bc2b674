#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "kahler/comparison.hpp"
#include "kahler/curvature.hpp"
#include "kahler/potential.hpp"
#include "kahler/power_series.hpp"
#include "kahler/series.hpp"

namespace kahler::io {

using nlohmann::json;

/// Term-list form {"n", "max_degree", "validity_radius", "terms": [{alpha, beta, re, im}]}.
/// With prefer_catalog, catalog potentials are written as {"catalog": {"name", params...}}.
json potential_to_json(const RealAnalyticPotential& pot, bool prefer_catalog = false);

/// Accepts either form; term lists go through the usual validation.
RealAnalyticPotential potential_from_json(const json& spec);
RealAnalyticPotential load_potential(const std::filesystem::path& path);

/// Parses "section6:a=0.1,lambda=50" or "flat:n=3".
CatalogId parse_catalog(const std::string& text);

json complex_vector(const Eigen::VectorXcd& v);
json real_vector(const Eigen::VectorXd& v);

/// Curvature components with labels like "R_{1 1bar 2 2bar}", plus g and the Ricci form.
json curvature_to_json(const CurvatureTensor& tensor);
json series_to_json(const SeriesExpansion& s);
json jacobi_to_json(const JacobiCoefficients& c);

json to_json(const RicciBoundCertificate& c);
json to_json(const LambdaSearch& s);
json to_json(const ComparisonReport& r);
json to_json(const CounterexampleReport& r);
json to_json(const RigidityReport& r);

void write_rows_csv(const ComparisonReport& r, std::ostream& out);
void write_pointwise_csv(const CounterexampleReport& r, std::ostream& out);
void write_rigidity_csv(const RigidityReport& r, std::ostream& out);
void write_lambda_trace_csv(const LambdaSearch& s, std::ostream& out);

/// Full-precision, locale-independent number formatting used by every CSV writer.
std::string format_number(double x);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kahler::io
