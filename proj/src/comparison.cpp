#include "kahler/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

#include "kahler/curvature.hpp"
#include "kahler/errors.hpp"
#include "kahler/exact_geometry.hpp"
#include "kahler/geodesic_flow.hpp"
#include "kahler/model_space.hpp"
#include "kahler/parallel.hpp"
#include "kahler/potential.hpp"
#include "kahler/series.hpp"

namespace kahler {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify(const std::vector<double>& margins, double tol) {
  bool holds = true;
  for (double m : margins) {
    if (!(m > -10.0 * tol)) return Verdict::violated;  // NaN counts as a violation
    if (m < -tol) holds = false;
  }
  return holds ? Verdict::holds : Verdict::inconclusive;
}

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::size_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Halton point in [-1, 1]^dim using primes starting at kPrimes[offset].
Eigen::VectorXd halton(std::size_t i, int dim, int offset) {
  Eigen::VectorXd x(dim);
  for (int k = 0; k < dim; ++k) x[k] = 2.0 * radical_inverse(i, kPrimes[offset + k]) - 1.0;
  return x;
}

Eigen::VectorXcd to_point(const Eigen::VectorXd& x) { return to_holomorphic(x); }

double min_shifted_eigenvalue(const KahlerMetricField& field, double K, const Eigen::VectorXcd& z) {
  const CurvatureTensor T = curvature_at(field, z);
  const Eigen::MatrixXcd A = ricci_at(T) - K * T.metric.g;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, T.metric.g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

RicciBoundCertificate certify_ricci_bound(const KahlerMetricField& field, double K, double rho,
                                          const CertifyOptions& options) {
  const int n = field.n();
  if (!(rho > 0.0)) throw ValidationError("certify_ricci_bound: rho must be positive");
  if (rho > field.validity_radius()) throw ValidationError("certify_ricci_bound: rho exceeds the validity radius");
  if (2 * n > 6) throw ValidationError("certify_ricci_bound: dimension too large for the sample generator");

  std::vector<Eigen::VectorXcd> points{Eigen::VectorXcd::Zero(n)};
  for (std::size_t i = 1; points.size() < options.samples + 1; ++i) {
    const Eigen::VectorXd x = halton(i, 2 * n, 0);
    if (x.squaredNorm() <= 1.0) points.push_back(to_point(rho * x));
  }
  int found = 0;
  for (std::size_t i = 1; found < options.directions; ++i) {
    const Eigen::VectorXd x = halton(i, 2 * n, 2 * n);
    if (x.norm() < 1e-3) continue;
    const Eigen::VectorXd u = x.normalized();
    for (int k = 1; k <= options.radial_steps; ++k) points.push_back(to_point(rho * k / options.radial_steps * u));
    ++found;
  }

  std::vector<double> values(points.size());
  parallel_for(points.size(), options.threads,
               [&](std::size_t i) { values[i] = min_shifted_eigenvalue(field, K, points[i]); });
  const auto it = std::min_element(values.begin(), values.end());
  RicciBoundCertificate out;
  out.potential_id = field.label();
  out.K = K;
  out.rho = rho;
  out.samples = points.size();
  out.min_eigenvalue = *it;
  out.witness = points[static_cast<std::size_t>(it - values.begin())];
  out.valid = out.min_eigenvalue >= -options.tolerance;
  return out;
}

LambdaSearch find_lambda(double a, double rho, const LambdaOptions& options) {
  LambdaSearch out;
  auto attempt = [&](double lambda) {
    const PolynomialMetricField field(catalog::section6(a, lambda));
    RicciBoundCertificate cert = certify_ricci_bound(field, -12.0 * a, rho, options.certify);
    out.trace.push_back({lambda, cert.min_eigenvalue, cert.valid});
    if (cert.valid) out.certificate = std::move(cert);
    return out.trace.back().passed;
  };
  if (attempt(0.0)) return out;
  double lo = 0.0, hi = options.start;
  while (!attempt(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.cap)
      throw TruncationError("find_lambda: no lambda up to " + std::to_string(options.cap) + " works; try a smaller rho", lo);
  }
  while (hi - lo > options.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (attempt(mid)) hi = mid;
    else lo = mid;
  }
  out.lambda = hi;  // the stored certificate belongs to the last passing trial, which is hi
  return out;
}

SphereProfile sphere_profile(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                             const std::vector<double>& radii, const CheckOptions& options) {
  if (radii.empty()) throw ValidationError("sphere_profile: empty radius grid");
  for (double r : radii)
    if (!(r > 0.0)) throw ValidationError("sphere_profile: radii must be positive");
  const int n = field->n();
  const SphereRule rule = build_rule(n, options.rule_degree < 0 ? default_rule_degree(n) : options.rule_degree);
  const std::vector<Eigen::VectorXd> dirs = tangent_directions(*field, p, rule);
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const std::size_t R = radii.size(), D = rule.size();
  std::vector<std::vector<double>> dens(R, std::vector<double>(D)), lap(R, std::vector<double>(D)),
      vol(R, std::vector<double>(D));
  parallel_for(D, options.threads, [&](std::size_t i) {
    RayOptions ro;
    ro.tol = options.ode_tol;
    ro.checkpoints = radii;
    const GeodesicRay ray = shoot(field, p, dirs[i], r_max, ro);
    if (ray.truncated()) throw TruncationError("sphere_profile: ray left the validity ball", ray.r_max());
    for (std::size_t k = 0; k < R; ++k) {
      const RadialDensity d = radial_density(ray, radii[k]);
      dens[k][i] = d.value;
      lap[k][i] = d.value * d.log_derivative;
      vol[k][i] = ray.volume_integral(radii[k]);
    }
  });
  SphereProfile out;
  out.radii = radii;
  for (std::size_t k = 0; k < R; ++k) {
    out.area.push_back(sphere_sum(rule, dens[k]));
    out.volume.push_back(sphere_sum(rule, vol[k]));
    out.mean_laplacian.push_back(sphere_sum(rule, lap[k]) / out.area.back());
  }
  return out;
}

namespace {

void require_certificate(const RicciBoundCertificate* cert, double K, const KahlerMetricField& field,
                         const Eigen::VectorXcd& p, double r_max) {
  if (!cert) throw ValidationError("certificate missing: run certify_ricci_bound first");
  if (!cert->valid)
    throw ValidationError("certificate refused: min eigenvalue " + std::to_string(cert->min_eigenvalue));
  if (cert->K < K) throw ValidationError("certificate proves a weaker Ricci bound than requested");
  // A unit geodesic from p moves at coordinate speed at most 1 / sqrt(2 lambda_min(g)).
  const double lmin = metric_at(field, p).g.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff();
  if (p.norm() + r_max / std::sqrt(2.0 * lmin) * 1.25 > cert->rho)
    throw ValidationError("radius grid leaves the certified ball");
}

std::string certificate_note(const RicciBoundCertificate& c) {
  return "Ric >= " + std::to_string(c.K) + " certified on |z| <= " + std::to_string(c.rho) + " (" +
         std::to_string(c.samples) + " samples, min eigenvalue " + std::to_string(c.min_eigenvalue) + ")";
}

}  // namespace

ComparisonReport check_volume_ratio(std::shared_ptr<const KahlerMetricField> field, double K,
                                    const Eigen::VectorXcd& p, const std::vector<std::pair<double, double>>& pairs,
                                    const RicciBoundCertificate* certificate, const CheckOptions& options) {
  if (pairs.empty()) throw ValidationError("check_volume_ratio: empty grid");
  std::set<double> unique;
  for (const auto& [a, b] : pairs) {
    if (!(a > 0.0 && b > a)) throw ValidationError("check_volume_ratio: need 0 < a < b");
    unique.insert(a);
    unique.insert(b);
  }
  const std::vector<double> radii(unique.begin(), unique.end());
  require_certificate(certificate, K, *field, p, radii.back());
  const ModelSpace model(field->n(), K);
  const SphereProfile prof = sphere_profile(field, p, radii, options);
  auto volume_at = [&](double r) {
    return prof.volume[static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), r) - radii.begin())];
  };
  ComparisonReport out;
  out.check = "volume_ratio";
  out.metric_id = field->label();
  out.K = K;
  out.point = p;
  out.tol = options.tol > 0.0 ? options.tol : 1e-6;
  out.relative = true;
  out.notes.push_back(certificate_note(*certificate));
  std::vector<double> margins;
  for (const auto& [a, b] : pairs) {
    ComparisonRow row;
    row.a = a;
    row.r = b;
    row.lhs = volume_at(b) / volume_at(a);
    row.rhs = ball_volume(model, b) / ball_volume(model, a);
    row.margin = (row.rhs - row.lhs) / row.rhs;
    margins.push_back(row.margin);
    out.rows.push_back(row);
  }
  out.verdict = classify(margins, out.tol);
  return out;
}

ComparisonReport check_average_laplacian(std::shared_ptr<const KahlerMetricField> field, double K,
                                         const Eigen::VectorXcd& p, const std::vector<double>& radii,
                                         const RicciBoundCertificate* certificate, const CheckOptions& options) {
  if (radii.empty()) throw ValidationError("check_average_laplacian: empty grid");
  require_certificate(certificate, K, *field, p, *std::max_element(radii.begin(), radii.end()));
  const ModelSpace model(field->n(), K);
  const SphereProfile prof = sphere_profile(field, p, radii, options);
  ComparisonReport out;
  out.check = "average_laplacian";
  out.metric_id = field->label();
  out.K = K;
  out.point = p;
  out.tol = options.tol > 0.0 ? options.tol : 1e-7;
  out.notes.push_back(certificate_note(*certificate));
  std::vector<double> margins;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ComparisonRow row;
    row.r = radii[k];
    row.lhs = prof.mean_laplacian[k];
    row.rhs = laplacian(model, radii[k]);
    row.margin = row.rhs - row.lhs;
    margins.push_back(row.margin);
    out.rows.push_back(row);
  }
  out.verdict = classify(margins, out.tol);
  return out;
}

bool CounterexampleReport::all_passed() const {
  if (certificate && !certificate->valid) return false;
  return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.passed; });
}

namespace {

ExactPolynomial radial_term(int p1, int p2, const ParamPoly& c) {
  const int e[2] = {p1, p2};
  return ExactPolynomial::monomial(e, e, ExactComplex(c));
}

ExactPolynomial mixed_term(int a1, int a2, int b1, int b2, const ParamPoly& c) {
  const int alpha[2] = {a1, a2}, beta[2] = {b1, b2};
  return ExactPolynomial::monomial(alpha, beta, ExactComplex(c));
}

ExactPolynomial lambda_part(const ExactPolynomial& p) {
  ExactPolynomial out(p.n());
  for (const auto& [key, c] : p.terms()) {
    ParamPoly re, im;
    for (const auto& [k, q] : c.re.terms())
      if (k.second > 0) re += ParamPoly::monomial(k.first, k.second, q);
    for (const auto& [k, q] : c.im.terms())
      if (k.second > 0) im += ParamPoly::monomial(k.first, k.second, q);
    out.add_term(key, ExactComplex(re, im));
  }
  return out;
}

StageResult stage_metric_golden(double a) {
  const ParamPoly A = ParamPoly::a(), A2 = A * A;
  const ExactPolynomial one = radial_term(0, 0, 1);
  const ExactPolynomial g11 = one + radial_term(1, 0, Rational(4) * A) + radial_term(0, 1, Rational(8) * A) +
                              radial_term(2, 0, Rational(24) * A2) + radial_term(1, 1, Rational(112) * A2) +
                              radial_term(0, 2, Rational(28) * A2);
  const ExactPolynomial g22 = one + radial_term(0, 1, Rational(4) * A) + radial_term(1, 0, Rational(8) * A) +
                              radial_term(0, 2, Rational(24) * A2) + radial_term(1, 1, Rational(112) * A2) +
                              radial_term(2, 0, Rational(28) * A2);
  const ExactPolynomial g12 = mixed_term(0, 1, 1, 0, Rational(8) * A) + mixed_term(1, 1, 2, 0, Rational(56) * A2) +
                              mixed_term(0, 2, 1, 1, Rational(56) * A2);
  const ExactPolynomial det = one + radial_term(1, 0, Rational(12) * A) + radial_term(0, 1, Rational(12) * A) +
                              radial_term(2, 0, Rational(84) * A2) + radial_term(0, 2, Rational(84) * A2) +
                              radial_term(1, 1, Rational(240) * A2);
  const exact::PolyMatrix g = exact::metric(catalog::section6_exact(), 4);
  const ExactPolynomial d = exact::determinant(g, 4);
  StageResult s;
  s.name = "metric_series";
  const bool ok11 = g[0][0] == g11, ok22 = g[1][1] == g22, ok12 = g[0][1] == g12, okdet = d == det;
  s.passed = ok11 && ok22 && ok12 && okdet;
  s.detail = std::string("g11 ") + (ok11 ? "match" : "MISMATCH") + ", g22 " + (ok22 ? "match" : "MISMATCH") +
             ", g12 " + (ok12 ? "match" : "MISMATCH") + ", det " + (okdet ? "match" : "MISMATCH") +
             " (exact, through degree 4); det = 1 + " + d.coeff({1, 0, 1, 0}).re.str() + " |z|^2 + ...";
  s.values = {{"det_|z1|^2", d.coeff({1, 0, 1, 0}).re.evaluate(a, 0.0)},
              {"det_|z1|^4", d.coeff({2, 0, 2, 0}).re.evaluate(a, 0.0)},
              {"det_|z1|^2|z2|^2", d.coeff({1, 1, 1, 1}).re.evaluate(a, 0.0)}};
  return s;
}

StageResult stage_ricci_order(double a) {
  const ExactPolynomial f = catalog::section6_exact();
  const ExactPolynomial phi = exact::ricci_shift_potential(f, ExactComplex(Rational(-12) * ParamPoly::a()), 6);
  const int lowest = exact::lowest_degree(exact::hessian(phi));
  const ExactPolynomial s2 = radial_term(1, 0, 1) + radial_term(0, 1, 1);
  const ExactPolynomial want = ExactComplex(Rational(24) * ParamPoly::lambda()) * (s2 * s2 * s2);
  const ExactPolynomial deg6 = phi.homogeneous_part(6);
  const bool lambda_ok = lambda_part(deg6) == want;
  StageResult s;
  s.name = "ricci_order3";
  s.passed = lowest >= 4 && lambda_ok;
  s.detail = "lowest nonvanishing degree of Ric + 12ag: " + std::to_string(lowest) +
             "; lambda part of the degree-6 potential " +
             (lambda_ok ? "equals 24 lambda (|z1|^2 + |z2|^2)^3" : "DIFFERS from 24 lambda (|z1|^2 + |z2|^2)^3");
  s.values = {{"lowest_degree", lowest}, {"a", a}};
  return s;
}

StageResult stage_curvature_origin(double a, const KahlerMetricField& field) {
  const RealFrameCurvature rf = real_frame_components(curvature_at(field, Eigen::VectorXcd::Zero(2)), Eigen::VectorXd::Unit(4, 0));
  double diag_err = 0.0, off = 0.0;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      if (u == v) diag_err = std::max(diag_err, std::abs(rf.R(u, u) - 4 * a));
      else off = std::max(off, std::abs(rf.R(u, v)));
    }
  StageResult s;
  s.name = "curvature_origin";
  s.passed = diag_err <= 1e-10 && off <= 1e-10;
  s.detail = "R_uu - 4a max " + std::to_string(diag_err) + ", off-diagonal max " + std::to_string(off);
  s.values = {{"R_1212", rf.R(0, 0)}, {"R_1313", rf.R(1, 1)}, {"R_1414", rf.R(2, 2)}, {"max_offdiag", off}};
  return s;
}

StageResult stage_direction_r4(double a, std::shared_ptr<const KahlerMetricField> field) {
  const SeriesExpansion s4 = direction_series(std::move(field), Eigen::VectorXcd::Zero(2), Eigen::VectorXd::Unit(4, 0), 4);
  const double model = model_density_ratio_series(ModelSpace(2, -12 * a), 4)[4];
  StageResult s;
  s.name = "direction_r4";
  s.passed = s4[4] > model;
  s.detail = "r^4 coefficient along d/dx1: " + std::to_string(s4[4]) + " vs model " + std::to_string(model);
  s.values = {{"direction_c4", s4[4]}, {"model_c4", model}, {"excess", s4[4] - model}};
  return s;
}

}  // namespace

CounterexampleReport verify_counterexample(double a, double lambda, const CounterexampleOptions& options) {
  if (a == 0.0) throw ValidationError("verify_counterexample: a must be nonzero");
  std::vector<double> radii = options.radii.empty() ? geometric_grid(5e-4, 0.04, 24) : options.radii;
  std::sort(radii.begin(), radii.end());
  CounterexampleReport out;
  out.a = a;
  out.lambda = lambda;
  const RealAnalyticPotential pot = catalog::section6(a, lambda);
  auto field = make_field(pot);
  if (options.certify) out.certificate = certify_ricci_bound(*field, -12 * a, radii.back(), options.certify_options);

  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.stages.push_back(fn());
    } catch (const std::exception& e) {
      out.stages.push_back({name, false, std::string("error: ") + e.what(), {}});
    }
  };
  guarded("metric_series", [&] { return stage_metric_golden(a); });
  guarded("ricci_order3", [&] { return stage_ricci_order(a); });
  guarded("curvature_origin", [&] { return stage_curvature_origin(a, *field); });
  guarded("direction_r4", [&] { return stage_direction_r4(a, field); });
  guarded("pointwise_laplacian", [&] {
    const ModelSpace model(2, -12 * a);
    const Eigen::VectorXd e0 = Eigen::VectorXd::Unit(4, 0);
    RayOptions fine, coarse;
    fine.tol = options.ode_tol;
    fine.checkpoints = radii;
    coarse = fine;
    coarse.tol = 100 * options.ode_tol;
    const GeodesicRay r1 = shoot(field, Eigen::VectorXcd::Zero(2), e0, radii.back(), fine);
    const GeodesicRay r2 = shoot(field, Eigen::VectorXcd::Zero(2), e0, radii.back(), coarse);
    for (double r : radii) {
      const double L = radial_density(r1, r).log_derivative, L2 = radial_density(r2, r).log_derivative;
      const double M = laplacian(model, r);
      const double budget = std::abs(L - L2) + 4 * std::numeric_limits<double>::epsilon() * std::abs(L);
      out.pointwise.push_back({r, L, M, L - M, budget});
    }
    // Longest run of consecutive grid radii whose margin clears 10x the budget.
    std::size_t best_begin = 0, best_len = 0;
    for (std::size_t k = 0; k < out.pointwise.size();) {
      std::size_t j = k;
      while (j < out.pointwise.size() && out.pointwise[j].margin > 10 * out.pointwise[j].budget) ++j;
      if (j - k > best_len) {
        best_begin = k;
        best_len = j - k;
      }
      k = j + 1;
    }
    StageResult s;
    s.name = "pointwise_laplacian";
    s.passed = best_len > 0;
    double best_ratio = 0.0, best_margin = 0.0;
    for (std::size_t k = best_begin; k < best_begin + best_len; ++k) {
      best_ratio = std::max(best_ratio, out.pointwise[k].margin / out.pointwise[k].budget);
      best_margin = std::max(best_margin, out.pointwise[k].margin);
    }
    if (best_len > 0) {
      out.interval_lo = out.pointwise[best_begin].r;
      out.interval_hi = out.pointwise[best_begin + best_len - 1].r;
      s.detail = "laplacian exceeds the model by more than 10x the error budget on [" + std::to_string(out.interval_lo) +
                 ", " + std::to_string(out.interval_hi) + "]";
    } else {
      s.detail = "no grid radius with margin above 10x the error budget";
    }
    s.values = {{"interval_lo", out.interval_lo},
                {"interval_hi", out.interval_hi},
                {"max_margin", best_margin},
                {"max_margin_over_budget", best_ratio}};
    return s;
  });
  return out;
}

RigidityReport rigidity_probe(std::shared_ptr<const KahlerMetricField> field, double K, const Eigen::VectorXcd& p,
                              int order, const CheckOptions& options) {
  if (order < 0 || order > 8) throw ValidationError("rigidity_probe: order must be in [0, 8]");
  const int n = field->n();
  const double scale = std::min(field->validity_radius(), 0.1);
  const std::vector<double> grid = geometric_grid(0.05 * scale, 0.8 * scale, 24);
  const SphereRule rule = build_rule(n, options.rule_degree < 0 ? default_rule_degree(n) : options.rule_degree);
  const auto samples = sample_w(field, p, rule, grid, options.ode_tol, options.threads);
  const SeriesExpansion fit = fit_w_series(samples, order + 4);
  const SeriesExpansion model = model_series(ModelSpace(n, K), std::max(order, 2));
  RigidityReport out;
  out.metric_id = field->label();
  out.K = K;
  const double vol = unit_sphere_volume(n);
  for (int k = 0; k <= order; k += 2) {
    RigidityRow row;
    row.order = k;
    row.fitted = fit[k];
    row.model = model[k];
    row.deviation = row.fitted - row.model;
    const double sigma = fit.covariance.rows() > k ? std::sqrt(std::max(fit.covariance(k, k), 0.0)) : 0.0;
    row.threshold = std::max(10 * sigma, 1e-5 * vol * std::pow(std::max(std::abs(K), 1.0), k / 2));
    if (out.first_deviation < 0 && std::abs(row.deviation) > row.threshold) {
      out.first_deviation = k;
      out.sign = row.deviation > 0 ? 1 : -1;
    }
    out.rows.push_back(row);
  }
  out.statement = out.first_deviation < 0
                      ? "no deviation detected through order " + std::to_string(order)
                      : "first deviation at order " + std::to_string(out.first_deviation) +
                            (out.sign > 0 ? " (above the model)" : " (below the model)");
  return out;
}

}  // namespace kahler
