#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kahler/errors.hpp"
#include "kahler/geodesic_flow.hpp"
#include "kahler/model_space.hpp"
#include "kahler/series.hpp"
#include "test_support.hpp"

using namespace kahler;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = N(rng);
  return (A + A.transpose()) / 2;
}

CurvatureJets synthetic_jets(std::vector<Eigen::MatrixXd> R) {
  CurvatureJets jets;
  jets.order = static_cast<int>(R.size()) - 1;
  jets.e0 = Eigen::VectorXd::Unit(R[0].rows() + 1, 0);
  for (const auto& M : R) jets.ricci.push_back(-M.trace());
  jets.R = std::move(R);
  return jets;
}

// Constant Jacobi matrix diag(-c, -c/4, ..., -c/4) with vanishing derivatives.
CurvatureJets space_form_jets(int n, double K, int order) {
  const double c = 2.0 * K / (n + 1);
  const int m = 2 * n - 1;
  Eigen::MatrixXd R = Eigen::MatrixXd::Constant(m, 1, -c / 4).asDiagonal();
  R(0, 0) = -c;
  std::vector<Eigen::MatrixXd> jets(order + 1, Eigen::MatrixXd::Zero(m, m));
  jets[0] = R;
  return synthetic_jets(jets);
}

// Taylor coefficient of r^i in sn_lambda(r).
double sn_coefficient(double lambda, int i) {
  if (i % 2 == 0) return 0.0;
  double c = 1.0;
  for (int k = 2; k <= i; ++k) c /= k;
  return c * std::pow(-lambda, (i - 1) / 2);
}

Eigen::VectorXd dx1(int n) { return Eigen::VectorXd::Unit(2 * n, 0); }

}  // namespace

TEST_CASE("recursion with vanishing curvature") {
  const CurvatureJets jets = synthetic_jets(std::vector<Eigen::MatrixXd>(3, Eigen::MatrixXd::Zero(3, 3)));
  const JacobiCoefficients C = jacobi_recursion(jets, 5);
  CHECK(C.A[1].isIdentity());
  for (int i = 2; i <= 5; ++i) CHECK(C.A[i].isZero(0.0));
  CHECK_THROWS_AS(jacobi_recursion(jets, 6), TruncationError);
}

TEST_CASE("low-order Jacobi coefficients") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd R0 = random_symmetric(rng, 3), R1 = random_symmetric(rng, 3), R2 = random_symmetric(rng, 3);
  const JacobiCoefficients C = jacobi_recursion(synthetic_jets({R0, R1, R2}), 5);
  CHECK(C.A[2].isZero(0.0));
  CHECK((C.A[3] - R0 / 6).norm() < 1e-15);
  CHECK((C.A[4] - R1 / 12).norm() < 1e-15);
  // C^v_{u,5} = (sum_s R_us R_sv + 3 R''_uv) / 120
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      double s = 3 * R2(u, v);
      for (int w = 0; w < 3; ++w) s += R0(u, w) * R0(w, v);
      CHECK(C.C(u, 5, v) == doctest::Approx(s / 120).epsilon(1e-14));
    }
}

TEST_CASE("space-form recursion reproduces sn through order 10") {
  for (int n : {2, 3})
    for (double K : {-2.0, 3.0}) {
      const double c = 2.0 * K / (n + 1);
      const JacobiCoefficients C = jacobi_recursion(space_form_jets(n, K, 8), 11);
      for (int i = 1; i <= 11; ++i) {
        CHECK(C.C(0, i, 0) == doctest::Approx(sn_coefficient(c, i)).epsilon(1e-13));
        for (int u = 1; u < 2 * n - 1; ++u) CHECK(C.C(u, i, u) == doctest::Approx(sn_coefficient(c / 4, i)).epsilon(1e-13));
        CHECK((C.A[i] - C.A[i].transpose()).norm() == 0.0);
      }
    }
}

TEST_CASE("density series: flat and closed-form coefficients") {
  const SeriesExpansion flat = density_series(jacobi_recursion(space_form_jets(2, 0.0, 3), 6), 6);
  CHECK(flat[0] == 1.0);
  for (int k = 1; k <= 5; ++k) CHECK(flat[k] == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3;
    const Eigen::MatrixXd R = random_symmetric(rng, m), R1 = random_symmetric(rng, m), R2 = random_symmetric(rng, m);
    const SeriesExpansion s = density_series(jacobi_recursion(synthetic_jets({R, R1, R2}), 5), 5);
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(R.trace() / 6).epsilon(1e-13));
    CHECK(s[3] == doctest::Approx(R1.trace() / 12).epsilon(1e-13));
    double c4 = R.squaredNorm() / 45 + R2.trace() / 40 - R.trace() * R.trace() / 72;
    for (int u = 0; u < m; ++u)
      for (int v = u + 1; v < m; ++v) c4 += (R(u, u) * R(v, v) - R(u, v) * R(u, v)) / 18;
    CHECK(s[4] == doctest::Approx(c4).epsilon(1e-12));
  }
}

TEST_CASE("density series matches the model and the geodesic ODE") {
  for (int n : {2, 3}) {
    const ModelSpace model(n, 1.5);
    const PowerSeries want = model_density_ratio_series(model, 6);
    const SeriesExpansion s = density_series(jacobi_recursion(space_form_jets(n, 1.5, 4), 7), 7);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(s[k] - want[k]) < 1e-14);
  }
  // Off-origin direction on a perturbed metric against the integrated density.
  auto field = make_field(catalog::perturbed(2, 5, 0.3));
  Eigen::VectorXcd p(2);
  p << std::complex<double>(0.02, -0.01), std::complex<double>(0.01, 0.015);
  Eigen::VectorXd e0(4);
  e0 << 0.3, -0.5, 0.7, 0.2;
  const SeriesExpansion s = direction_series(field, p, e0, 6);
  const GeodesicRay ray = shoot(field, p, e0, 0.02);
  for (double r : {0.005, 0.01, 0.02}) {
    double series = 0.0;
    for (int k = 6; k >= 0; --k) series = series * r + s[k];
    CHECK(std::abs(radial_density(ray, r).value / std::pow(r, 3) - series) < 1e-4 * std::pow(r, 7) + 1e-12);
  }
}

TEST_CASE("counterexample direction exceeds the model at order four") {
  const double a = 0.1;
  for (double lambda : {0.0, 50.0}) {
    const SeriesExpansion s = direction_series(make_field(catalog::section6(a, lambda)), Eigen::VectorXcd::Zero(2), dx1(2), 4);
    const PowerSeries model = model_density_ratio_series(ModelSpace(2, -12 * a), 4);
    CHECK(s[2] == doctest::Approx(model[2]).epsilon(1e-10));
    CHECK(s[4] == doctest::Approx(26 * a * a / 15).epsilon(1e-7));
    CHECK(model[4] == doctest::Approx(1.6 * a * a).epsilon(1e-14));
    CHECK(s[4] > model[4]);
  }
}

TEST_CASE("sphere-averaged r^4 coefficient") {
  const SphereRule rule = build_rule(2, default_rule_degree(2));
  const Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(2);
  CHECK(std::abs(c4_sphere_average(make_field(catalog::flat(2)), origin, rule).value) < 1e-12);

  // Space form: c4 = C2 K^2 with C2 calibrated at one K and re-tested at another.
  const C4Average at1 = c4_sphere_average(std::make_shared<SpaceFormMetricField>(2, 1.0), origin, rule);
  CHECK(at1.einstein);
  CHECK(at1.value == doctest::Approx(model_series(ModelSpace(2, 1.0), 4)[4]).epsilon(1e-8));
  const double C2 = at1.value;
  const C4Average at3 = c4_sphere_average(std::make_shared<SpaceFormMetricField>(2, -3.0), origin, rule);
  CHECK(at3.value == doctest::Approx(C2 * 9).epsilon(1e-8));

  const double a = 0.1;
  const C4Average sec = c4_sphere_average(make_field(catalog::section6(a, 50.0)), origin, rule);
  CHECK(sec.einstein);
  CHECK(sec.K == doctest::Approx(-12 * a));
  CHECK(sec.value < model_series(ModelSpace(2, -12 * a), 4)[4]);
  CHECK(sec.value == doctest::Approx(0.2895083957).epsilon(1e-6));

  Eigen::VectorXcd p(2);
  p << 0.02, 0.0;
  const C4Average off = c4_sphere_average(make_field(catalog::section6(a, 50.0)), p, rule);
  CHECK_FALSE(off.einstein);
  CHECK_FALSE(off.warning.empty());
}

TEST_CASE("odd sphere-averaged coefficients vanish") {
  const SphereRule rule = build_rule(2, default_rule_degree(2));
  Eigen::VectorXcd p(2);
  p << std::complex<double>(0.02, 0.01), std::complex<double>(-0.01, 0.015);
  for (const auto& pot : {catalog::section6(0.1, 50.0), catalog::perturbed(2, 5, 0.3), catalog::space_form(2, 2.0)}) {
    const SeriesExpansion s = averaged_series(make_field(pot), p, rule, 4);
    CHECK(s.provenance == "quadrature");
    CHECK(s[0] == doctest::Approx(unit_sphere_volume(2)).epsilon(1e-13));
    CHECK(std::abs(s[1]) < 1e-12);
    CHECK(std::abs(s[3]) < 1e-6);
  }
}

TEST_CASE("polynomial fitting") {
  const std::vector<double> grid = geometric_grid(5e-3, 8e-2, 24);
  std::vector<std::pair<double, double>> exact, flat;
  for (double r : grid) {
    exact.emplace_back(r, 2.0 - 3.0 * r * r + 5.0 * std::pow(r, 4) - 7.0 * std::pow(r, 6));
    flat.emplace_back(r, unit_sphere_volume(2));
  }
  const SeriesExpansion e = fit_w_series(exact, 6);
  CHECK(e.provenance == "fitted");
  CHECK(e[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(e[4] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(e.covariance.rows() == 7);
  const SeriesExpansion f = fit_w_series(flat, 6, {}, {false});
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(f[k]) < 1e-10);

  CHECK_THROWS_AS(fit_w_series(std::vector<std::pair<double, double>>(exact.begin(), exact.begin() + 7), 6), ValidationError);
  const std::vector<double> narrow = geometric_grid(0.05, 0.0500001, 40);
  std::vector<std::pair<double, double>> bad;
  for (double r : narrow) bad.emplace_back(r, 1.0 + r);
  CHECK_THROWS_WITH_AS(fit_w_series(bad, 8, {}, {false}), doctest::Contains("reduce N or widen grid"), ValidationError);
}

TEST_CASE("fit on closed-form model samples") {
  for (double K : {-3.0, 1.0}) {
    const ModelSpace model(2, K);
    const SeriesExpansion want = model_series(model, 8);
    auto samples_on = [&](const std::vector<double>& grid) {
      std::vector<std::pair<double, double>> s;
      for (double r : grid) s.emplace_back(r, unit_sphere_volume(2) * density(model, r) / std::pow(r, 3));
      return s;
    };
    const SeriesExpansion fit = fit_w_series(samples_on(geometric_grid(5e-3, 8e-2, 24)), 6, samples_on(geometric_grid(6e-3, 7e-2, 11)));
    CHECK(fit[2] == doctest::Approx(want[2]).epsilon(1e-6));
    CHECK(fit[4] == doctest::Approx(want[4]).epsilon(1e-4));
    CHECK(fit.cross_validation_residual < 1e-10);
    const SeriesExpansion shifted = fit_w_series(samples_on(geometric_grid(4e-3, 6e-2, 24)), 6);
    CHECK(shifted[2] == doctest::Approx(fit[2]).epsilon(1e-4));
  }
}

TEST_CASE("consistency triangle on the space form") {
  for (double K : {-1.0, 3.0}) {
    const int n = 2;
    auto field = std::make_shared<SpaceFormMetricField>(n, K);
    const SphereRule rule = build_rule(n, default_rule_degree(n));
    const Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(n);
    const SeriesExpansion model = model_series(ModelSpace(n, K), 8);
    const SeriesExpansion symbolic = averaged_series(field, origin, rule, 4);
    const SeriesExpansion fitted = fit_w_series(sample_w(field, origin, rule, geometric_grid(5e-3, 8e-2, 24)), 6);
    CHECK(symbolic[2] == doctest::Approx(model[2]).epsilon(1e-6));
    CHECK(fitted[2] == doctest::Approx(model[2]).epsilon(1e-6));
    CHECK(symbolic[4] == doctest::Approx(model[4]).epsilon(1e-4));
    CHECK(fitted[4] == doctest::Approx(model[4]).epsilon(1e-4));
  }
}

TEST_CASE("holomorphic sectional curvature averages to a multiple of the scalar curvature") {
  const SphereRule rule = build_rule(2, default_rule_degree(2));
  const double C3 = calibrate_c3(2, rule);
  const Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(2);
  const R11Identity flat = kahler_r11_identity_check(*make_field(catalog::flat(2)), origin, rule, C3);
  CHECK(flat.lhs == 0.0);
  CHECK(flat.rhs == 0.0);
  const R11Identity sf = kahler_r11_identity_check(SpaceFormMetricField(2, -2.0), origin, rule, C3);
  CHECK(std::abs(sf.residual) < 1e-8);
  Eigen::VectorXcd p(2);
  p << std::complex<double>(0.03, 0.01), std::complex<double>(-0.02, 0.01);
  for (const auto& pot : {catalog::section6(0.1, 50.0), catalog::perturbed(2, 5, 0.3)})
    for (const Eigen::VectorXcd& q : {origin, p}) {
      const R11Identity id = kahler_r11_identity_check(*make_field(pot), q, rule, C3);
      CHECK(std::abs(id.residual) < 1e-10 * std::max(1.0, std::abs(id.lhs)));
    }
}
