#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kahler/metric_field.hpp"
#include "kahler/power_series.hpp"
#include "kahler/sphere_quadrature.hpp"

namespace kahler {

enum class Verdict { holds, violated, inconclusive };
std::string to_string(Verdict v);

/// holds if every margin >= -tol, violated if some margin <= -10 tol, else inconclusive.
Verdict classify(const std::vector<double>& margins, double tol);

/// Evidence that Ric - K g is positive semidefinite on the coordinate ball |z| <= rho.
struct RicciBoundCertificate {
  std::string potential_id;
  double K = 0.0;
  double rho = 0.0;
  double min_eigenvalue = 0.0;  ///< of g^{-1}(Ric - K g) over all samples
  Eigen::VectorXcd witness;     ///< sample attaining min_eigenvalue
  std::size_t samples = 0;
  bool valid = false;           ///< min_eigenvalue >= -1e-9
};

struct CertifyOptions {
  std::size_t samples = 10000;   ///< low-discrepancy interior points
  int directions = 64;           ///< radial rays
  int radial_steps = 16;         ///< points per ray, ending at rho
  double tolerance = 1e-9;
  int threads = 0;
};

RicciBoundCertificate certify_ricci_bound(const KahlerMetricField& field, double K, double rho,
                                          const CertifyOptions& options = {});

struct LambdaTrial {
  double lambda;
  double min_eigenvalue;
  bool passed;
};
struct LambdaSearch {
  double lambda = 0.0;
  std::vector<LambdaTrial> trace;
  RicciBoundCertificate certificate;
};

struct LambdaOptions {
  double start = 1.0;
  double cap = 1e6;
  double rel_tol = 1e-6;
  CertifyOptions certify;
};

/// Smallest lambda (doubling from `start`, then bisection) for which section6(a, lambda)
/// satisfies Ric >= -12 a on |z| <= rho. Checks lambda = 0 first.
LambdaSearch find_lambda(double a, double rho, const LambdaOptions& options = {});

struct ComparisonRow {
  double a = 0.0;  ///< inner radius (volume ratios only)
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs, relative to rhs for volume ratios
};

struct ComparisonReport {
  std::string check;
  std::string metric_id;
  double K = 0.0;
  Eigen::VectorXcd point;
  std::vector<ComparisonRow> rows;
  Verdict verdict = Verdict::inconclusive;
  double tol = 0.0;
  bool relative = false;
  std::vector<std::string> notes;
};

struct CheckOptions {
  double tol = 0.0;          ///< 0 selects the check's default
  int rule_degree = -1;      ///< -1 selects default_rule_degree(n)
  double ode_tol = 1e-12;
  int threads = 0;
};

/// Geodesic sphere data at p: area(r), volume(r), and the density-weighted mean of
/// the Laplacian of r over the sphere.
struct SphereProfile {
  std::vector<double> radii;
  std::vector<double> area;
  std::vector<double> volume;
  std::vector<double> mean_laplacian;
};
SphereProfile sphere_profile(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                             const std::vector<double>& radii, const CheckOptions& options = {});

/// Vol(B(b)) / Vol(B(a)) against the model ratio; default tol 1e-6 relative.
ComparisonReport check_volume_ratio(std::shared_ptr<const KahlerMetricField> field, double K,
                                    const Eigen::VectorXcd& p, const std::vector<std::pair<double, double>>& pairs,
                                    const RicciBoundCertificate* certificate, const CheckOptions& options = {});

/// Density-weighted mean Laplacian of r against the model Laplacian; default tol 1e-7.
ComparisonReport check_average_laplacian(std::shared_ptr<const KahlerMetricField> field, double K,
                                         const Eigen::VectorXcd& p, const std::vector<double>& radii,
                                         const RicciBoundCertificate* certificate, const CheckOptions& options = {});

struct StageResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> values;
};

struct PointwiseRow {
  double r;
  double laplacian;
  double model;
  double margin;  ///< laplacian - model
  double budget;  ///< |margin(tol) - margin(100 tol)| plus a rounding floor
};

struct CounterexampleReport {
  double a = 0.0;
  double lambda = 0.0;
  std::optional<RicciBoundCertificate> certificate;
  std::vector<StageResult> stages;  ///< (i) .. (v)
  std::vector<PointwiseRow> pointwise;
  double interval_lo = 0.0;  ///< longest run of grid radii with margin > 10 budget
  double interval_hi = 0.0;
  bool all_passed() const;
};

struct CounterexampleOptions {
  std::vector<double> radii;  ///< empty: 24 geometric points in [5e-4, 0.04]
  double ode_tol = 1e-12;
  bool certify = true;
  CertifyOptions certify_options;
};

CounterexampleReport verify_counterexample(double a, double lambda, const CounterexampleOptions& options = {});

struct RigidityRow {
  int order;
  double fitted;
  double model;
  double deviation;  ///< fitted - model
  double threshold;
};
struct RigidityReport {
  std::string metric_id;
  double K = 0.0;
  std::vector<RigidityRow> rows;
  int first_deviation = -1;  ///< -1: none through the probed order
  int sign = 0;
  std::string statement;
};

/// Compares fitted W coefficients (even orders through `order`) with the model's.
/// Odd orders vanish for every metric and are not probed.
RigidityReport rigidity_probe(std::shared_ptr<const KahlerMetricField> field, double K, const Eigen::VectorXcd& p,
                              int order = 6, const CheckOptions& options = {});

}  // namespace kahler
