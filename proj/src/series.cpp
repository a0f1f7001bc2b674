#include "kahler/series.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "kahler/errors.hpp"
#include "kahler/geodesic_flow.hpp"
#include "kahler/parallel.hpp"

namespace kahler {

JacobiCoefficients jacobi_recursion(const CurvatureJets& jets, int N) {
  if (N < 1) throw ValidationError("jacobi_recursion: N must be at least 1");
  if (jets.R.empty()) throw ValidationError("jacobi_recursion: empty jets");
  if (N - 3 > jets.order)
    throw TruncationError("jacobi_recursion: need jets of order " + std::to_string(N - 3) + ", have " +
                              std::to_string(jets.order),
                          jets.order);
  const Eigen::Index m = jets.R[0].rows();
  JacobiCoefficients out;
  out.e0 = jets.e0;
  out.order = N;
  out.A.assign(N + 1, Eigen::MatrixXd::Zero(m, m));
  out.A[1].setIdentity();
  for (int i = 3; i <= N; ++i) {
    double jfact = 1.0;
    for (int j = 0; j <= i - 3; ++j) {
      if (j > 0) jfact *= j;
      const int k = i - 2 - j;
      out.A[i] += jets.R[j] * out.A[k] / (jfact * i * (i - 1));
    }
  }
  return out;
}

SeriesExpansion density_series(const JacobiCoefficients& coeffs, int N) {
  if (N < 1 || N > coeffs.order)
    throw TruncationError("density_series: need Jacobi coefficients of order " + std::to_string(N), coeffs.order);
  const Eigen::Index m = coeffs.A[1].rows();
  const int order = N - 1;
  // B = J / r as a matrix of series; column u is J_u.
  std::vector<std::vector<PowerSeries>> B(m, std::vector<PowerSeries>(m, PowerSeries(order)));
  for (Eigen::Index v = 0; v < m; ++v)
    for (Eigen::Index u = 0; u < m; ++u)
      for (int k = 0; k <= order; ++k) B[v][u][k] = coeffs.A[k + 1](v, u);
  std::vector<std::vector<PowerSeries>> G(m, std::vector<PowerSeries>(m, PowerSeries(order)));
  for (Eigen::Index u = 0; u < m; ++u)
    for (Eigen::Index v = 0; v < m; ++v)
      for (Eigen::Index w = 0; w < m; ++w) G[u][v] = G[u][v] + B[w][u] * B[w][v];
  const PowerSeries root = series_determinant(G).sqrt();
  SeriesExpansion out;
  out.coefficients = root.coeffs();
  out.provenance = "symbolic";
  return out;
}

SeriesExpansion direction_series(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                 const Eigen::VectorXd& e0, int order) {
  if (order < 0 || order > 6) throw ValidationError("direction_series: order must be in [0, 6]");
  const int N = order + 1;
  const CurvatureJets jets = curvature_jets_along(std::move(field), p, e0, std::max(N - 3, 0));
  return density_series(jacobi_recursion(jets, N), N);
}

std::vector<Eigen::VectorXd> tangent_directions(const KahlerMetricField& field, const Eigen::VectorXcd& p,
                                                const SphereRule& rule) {
  if (rule.n != field.n()) throw ValidationError("sphere rule dimension differs from the metric dimension");
  const Eigen::MatrixXd Q = tangent_isometry(metric_at(field, p).g);
  std::vector<Eigen::VectorXd> out;
  out.reserve(rule.size());
  for (const auto& x : rule.nodes) out.push_back(Q * x);
  return out;
}

SeriesExpansion averaged_series(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                const SphereRule& rule, int order, int threads) {
  const std::vector<Eigen::VectorXd> dirs = tangent_directions(*field, p, rule);
  std::vector<SeriesExpansion> per(rule.size());
  parallel_for(rule.size(), threads, [&](std::size_t i) { per[i] = direction_series(field, p, dirs[i], order); });
  SeriesExpansion out;
  out.provenance = "quadrature";
  out.coefficients.assign(order + 1, 0.0);
  std::vector<double> values(rule.size());
  for (int k = 0; k <= order; ++k) {
    for (std::size_t i = 0; i < rule.size(); ++i) values[i] = per[i][k];
    out.coefficients[k] = sphere_sum(rule, values);
  }
  return out;
}

C4Average c4_sphere_average(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                            const SphereRule& rule, int threads) {
  C4Average out;
  const CurvatureTensor T = curvature_at(*field, p);
  const int n = field->n();
  out.K = scalar_at(T) / n;
  const Eigen::MatrixXcd shift = ricci_at(T) - out.K * T.metric.g;
  out.einstein_residual = shift.cwiseAbs().maxCoeff();
  out.einstein = out.einstein_residual <= 1e-8 * std::max(1.0, std::abs(out.K));
  if (!out.einstein)
    out.warning = "Ric is not a multiple of g at p (residual " + std::to_string(out.einstein_residual) +
                  "); returning the raw integral";
  out.value = averaged_series(std::move(field), p, rule, 4, threads)[4];
  return out;
}

std::vector<double> geometric_grid(double r_min, double r_max, int count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2) throw ValidationError("geometric_grid: need 0 < r_min < r_max, count >= 2");
  std::vector<double> out(count);
  const double q = std::log(r_max / r_min) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = r_min * std::exp(q * i);
  out.back() = r_max;
  return out;
}

SeriesExpansion fit_w_series(const std::vector<std::pair<double, double>>& samples, int N,
                             const std::vector<std::pair<double, double>>& validation, const FitOptions& options) {
  std::vector<int> powers;
  for (int k = 0; k <= N; ++k)
    if (!options.even_only || k % 2 == 0) powers.push_back(k);
  const Eigen::Index P = static_cast<Eigen::Index>(powers.size());
  const Eigen::Index M = static_cast<Eigen::Index>(samples.size());
  if (N < 0 || M < 2 * P) throw ValidationError("fit_w_series: need at least two samples per coefficient");
  double scale = 0.0;
  for (const auto& [r, w] : samples) {
    if (!(r > 0.0) || !std::isfinite(w)) throw ValidationError("fit_w_series: samples need r > 0 and finite W");
    scale = std::max(scale, r);
  }
  // Fit the deviation from the mean so constant data gives exact zeros.
  double mean = 0.0;
  for (const auto& sample : samples) mean += sample.second / static_cast<double>(M);
  Eigen::MatrixXd A(M, P);
  Eigen::VectorXd y(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double t = samples[i].first / scale;
    for (Eigen::Index j = 0; j < P; ++j) A(i, j) = std::pow(t, powers[j]);
    y[i] = samples[i].second - mean;
  }
  const Eigen::VectorXd colnorm = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * colnorm.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cond = sv[0] / sv[P - 1];
  if (!(cond <= options.max_condition))
    throw ValidationError("fit_w_series: condition number " + std::to_string(cond) + " exceeds the limit; reduce N or widen grid");
  const Eigen::VectorXd beta = svd.solve(y);

  SeriesExpansion out;
  out.provenance = "fitted";
  out.condition_number = cond;
  out.coefficients.assign(N + 1, 0.0);
  Eigen::VectorXd to_coeff(P);
  for (Eigen::Index j = 0; j < P; ++j) {
    to_coeff[j] = 1.0 / (colnorm[j] * std::pow(scale, powers[j]));
    out.coefficients[powers[j]] = beta[j] * to_coeff[j];
  }
  out.coefficients[0] += mean;
  const Eigen::VectorXd resid = y - As * beta;
  const double sigma2 = M > P ? resid.squaredNorm() / static_cast<double>(M - P) : 0.0;
  const Eigen::MatrixXd Vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd cov_beta = sigma2 * Vs * Vs.transpose();
  out.covariance = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index j = 0; j < P; ++j)
      out.covariance(powers[i], powers[j]) = cov_beta(i, j) * to_coeff[i] * to_coeff[j];

  for (const auto& [r, w] : validation) {
    double fit = 0.0;
    for (int k = N; k >= 0; --k) fit = fit * r + out.coefficients[k];
    out.cross_validation_residual = std::max(out.cross_validation_residual, std::abs(fit - w) / std::max(std::abs(w), 1e-300));
  }
  return out;
}

std::vector<std::pair<double, double>> sample_w(std::shared_ptr<const KahlerMetricField> field,
                                                const Eigen::VectorXcd& p, const SphereRule& rule,
                                                const std::vector<double>& radii, double tol, int threads) {
  if (radii.empty()) throw ValidationError("sample_w: empty radius grid");
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const int m = 2 * field->n() - 1;
  const std::vector<Eigen::VectorXd> dirs = tangent_directions(*field, p, rule);
  std::vector<std::vector<double>> values(radii.size(), std::vector<double>(rule.size()));
  parallel_for(rule.size(), threads, [&](std::size_t i) {
    RayOptions opts;
    opts.tol = tol;
    opts.checkpoints = radii;
    const GeodesicRay ray = shoot(field, p, dirs[i], r_max, opts);
    for (std::size_t k = 0; k < radii.size(); ++k)
      values[k][i] = radial_density(ray, radii[k]).value / std::pow(radii[k], m);
  });
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < radii.size(); ++k) out.emplace_back(radii[k], sphere_sum(rule, values[k]));
  return out;
}

namespace {

double r11_integral(const CurvatureTensor& T, const SphereRule& rule) {
  const Eigen::MatrixXd Q = tangent_isometry(T.metric.g);
  return sphere_average(rule, [&](const Eigen::VectorXd& x) { return real_frame_components(T, Q * x).R(0, 0); });
}

}  // namespace

double calibrate_c3(int n, const SphereRule& rule, double K_cal) {
  if (K_cal == 0.0) throw ValidationError("calibrate_c3: K must be nonzero");
  const SpaceFormMetricField field(n, K_cal);
  const CurvatureTensor T = curvature_at(field, Eigen::VectorXcd::Zero(n));
  return r11_integral(T, rule) / scalar_at(T);
}

R11Identity kahler_r11_identity_check(const KahlerMetricField& field, const Eigen::VectorXcd& p,
                                      const SphereRule& rule, double C3) {
  const CurvatureTensor T = curvature_at(field, p);
  R11Identity out;
  out.C3 = C3;
  out.lhs = r11_integral(T, rule);
  out.rhs = C3 * scalar_at(T);
  out.residual = out.lhs - out.rhs;
  return out;
}

}  // namespace kahler
