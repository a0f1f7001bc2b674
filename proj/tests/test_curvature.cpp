#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include "kahler/curvature.hpp"
#include "kahler/errors.hpp"
#include "test_support.hpp"

using namespace kahler;

namespace {

Eigen::VectorXd dx1(int n) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * n);
  e[0] = 1.0;
  return e;
}

double max_abs(const KahlerTensor& R) {
  double m = 0.0;
  for (const auto& c : R.data()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("flat metric has vanishing curvature everywhere") {
  std::mt19937_64 rng(1);
  const auto pot = catalog::flat(2);
  const Eigen::VectorXcd z = kt::random_point(rng, 2, 0.5);
  const HermitianMetric g = metric_at(pot, z);
  CHECK((g.g - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
  const CurvatureTensor R = curvature_at(pot, z);
  CHECK(max_abs(R.components) == 0.0);
  CHECK(ricci_at(R).norm() == 0.0);
  CHECK(scalar_at(R) == 0.0);
  CHECK(real_frame_components(R, dx1(2)).R.norm() == 0.0);
}

TEST_CASE("metric inverse and positivity") {
  std::mt19937_64 rng(2);
  const auto pot = catalog::perturbed(3, 7, 0.2);
  for (int t = 0; t < 20; ++t) {
    const HermitianMetric g = metric_at(pot, kt::random_point(rng, 3, 0.09));
    CHECK((g.g * g.g_inv - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((g.g - g.g.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("non positive definite metric reports the offending eigenvalue") {
  // |z|^2 - |z|^4 has g = 1 - 4|z|^2, negative beyond |z| = 1/2.
  const RealAnalyticPotential pot(1, {{{1}, {1}, 1.0}, {{2}, {2}, -1.0}}, 4, 10.0);
  Eigen::VectorXcd z(1);
  z[0] = 1.0;
  try {
    metric_at(pot, z);
    FAIL("expected OutsideKahlerDomain");
  } catch (const OutsideKahlerDomain& e) {
    CHECK(e.min_eigenvalue == doctest::Approx(-3.0));
  }
}

TEST_CASE("section6 metric matches the printed expansion") {
  const double a = 0.1;
  const auto pot = catalog::section6(a, 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXcd z = kt::random_point(rng, 2, 0.01);
    const std::complex<double> z1 = z[0], z2 = z[1];
    const double s1 = std::norm(z1), s2 = std::norm(z2);
    const HermitianMetric g = metric_at(pot, z);
    const double g11 = 1 + 4 * a * s1 + 8 * a * s2 + 24 * a * a * s1 * s1 + 112 * a * a * s1 * s2 + 28 * a * a * s2 * s2;
    const std::complex<double> g12 = 8 * a * std::conj(z1) * z2 + 56 * a * a * z1 * std::conj(z1) * std::conj(z1) * z2 +
                                     56 * a * a * std::conj(z1) * z2 * z2 * std::conj(z2);
    // section6 with lambda = 0 is exactly the printed polynomial through degree 4 in g.
    CHECK(std::abs(g.g(0, 0) - g11) < 1e-14);
    CHECK(std::abs(g.g(0, 1) - g12) < 1e-14);
    const double det = 1 + 12 * a * (s1 + s2) + 84 * a * a * (s1 * s1 + s2 * s2) + 240 * a * a * s1 * s2;
    CHECK(std::abs(g.g.determinant().real() - det) < 1e-9);  // O(|z|^6) remainder
  }
}

TEST_CASE("section6 curvature at the origin") {
  for (double a : {0.1, -0.1, 0.37}) {
    const auto pot = catalog::section6(a, 50.0);
    const CurvatureTensor R = curvature_at(pot, Eigen::VectorXcd::Zero(2));
    const RealFrameCurvature F = real_frame_components(R, dx1(2));
    Eigen::MatrixXd expected = 4 * a * Eigen::MatrixXd::Identity(3, 3);
    CHECK((F.R - expected).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXcd ric = ricci_at(R);
    CHECK((ric + 12 * a * R.metric.g).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(scalar_at(R) == doctest::Approx(-24 * a).epsilon(1e-12));
  }
}

TEST_CASE("space form tensor and its real-frame spectrum") {
  std::mt19937_64 rng(4);
  for (int n : {2, 3}) {
    for (double K : {-3.0, 1.0, 3.0}) {
      const double kappa = K / (n + 1), c = 2 * K / (n + 1);
      const auto pot = catalog::space_form(n, K);
      const CurvatureTensor R0 = curvature_at(pot, Eigen::VectorXcd::Zero(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double want = kappa * ((i == j && k == l) + (i == l && k == j));
              CHECK(std::abs(R0.components(i, j, k, l) - want) < 1e-13);
            }
      const SpaceFormMetricField closed(n, K);
      for (int t = 0; t < 5; ++t) {
        const Eigen::VectorXcd z = kt::random_point(rng, n, 0.05);
        const CurvatureTensor Rp = curvature_at(pot, z);
        const CurvatureTensor Rc = curvature_at(closed, z);
        for (std::size_t q = 0; q < Rp.components.data().size(); ++q)
          CHECK(std::abs(Rp.components.data()[q] - Rc.components.data()[q]) < 1e-12);
        const RealFrameCurvature F = real_frame_components(Rc, kt::random_direction(rng, n));
        Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(2 * n - 1, 2 * n - 1) * (-c / 4);
        expected(0, 0) = -c;
        CHECK((F.R - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ricci_at(Rc) - K * Rc.metric.g).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(scalar_at(Rc) == doctest::Approx(n * K).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Kahler symmetries, Bianchi identity and J-invariance on random potentials") {
  std::mt19937_64 rng(5);
  const std::complex<double> I(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const auto pot = catalog::perturbed(n, 100 + trial, 0.3);
    const CurvatureTensor T = curvature_at(pot, kt::random_point(rng, n, 0.08));
    const KahlerTensor& R = T.components;
    const double scale = max_abs(R);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            CHECK(std::abs(R(i, j, k, l) - R(k, j, i, l)) < 1e-12 * scale);
            CHECK(std::abs(R(i, j, k, l) - R(i, l, k, j)) < 1e-12 * scale);
            CHECK(std::abs(R(i, j, k, l) - std::conj(R(j, i, l, k))) < 1e-12 * scale);
          }
    auto rv = [&] { return to_holomorphic(kt::random_direction(rng, n)); };
    const Eigen::VectorXcd x = rv(), y = rv(), z = rv(), w = rv();
    const double bianchi = real_curvature(R, x, y, z, w) + real_curvature(R, y, z, x, w) + real_curvature(R, z, x, y, w);
    CHECK(std::abs(bianchi) < 1e-10);
    const double rxyzw = real_curvature(R, x, y, z, w);
    CHECK(std::abs(real_curvature(R, I * x, I * y, I * z, I * w) - rxyzw) < 1e-12 * (1 + std::abs(rxyzw)));
    CHECK(std::abs(real_curvature(R, x, y, z, w) + real_curvature(R, y, x, z, w)) < 1e-12);
  }
}

TEST_CASE("trace of the Jacobi curvature matrix is minus the Ricci curvature") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    const auto pot = catalog::perturbed(n, 1000 + trial, 0.3);
    const CurvatureTensor T = curvature_at(pot, kt::random_point(rng, n, 0.08));
    const RealFrameCurvature F = real_frame_components(T, kt::random_direction(rng, n));
    CHECK((F.R - F.R.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // Independent contraction: Ric(e0, e0) = sum over an orthonormal basis of R(e_a, e0, e0, e_a).
    double ric = 0.0;
    for (int a = 1; a < 2 * n; ++a) {
      const Eigen::VectorXcd ea = to_holomorphic(F.frame.col(a));
      const Eigen::VectorXcd e0 = to_holomorphic(F.frame.col(0));
      ric += real_curvature(T.components, ea, e0, e0, ea);
    }
    CHECK(F.R.trace() == doctest::Approx(-ric).epsilon(1e-10));
    CHECK(ricci_in_direction(T, F.e0) == doctest::Approx(ric).epsilon(1e-10));
    // Frame is orthonormal with e1 = J e0.
    Eigen::MatrixXd gram(2 * n, 2 * n);
    for (int u = 0; u < 2 * n; ++u)
      for (int v = 0; v < 2 * n; ++v)
        gram(u, v) = real_inner(T.metric.g, to_holomorphic(F.frame.col(u)), to_holomorphic(F.frame.col(v)));
    CHECK((gram - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((to_holomorphic(F.frame.col(1)) - std::complex<double>(0, 1) * to_holomorphic(F.frame.col(0))).norm() <
          1e-15);
  }
}

TEST_CASE("scalar curvature is invariant under unitary coordinate changes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 2;
    const auto pot = catalog::perturbed(n, 50 + trial, 0.3);
    const Eigen::MatrixXcd U = kt::random_unitary(rng, n);
    const auto rotated = kt::compose_linear(pot, U);
    const Eigen::VectorXcd z = kt::random_point(rng, n, 0.05);
    CHECK(scalar_at(rotated, z) == doctest::Approx(scalar_at(pot, U * z)).epsilon(1e-9));
  }
}

TEST_CASE("degenerate direction is rejected") {
  const auto pot = catalog::flat(2);
  const CurvatureTensor T = curvature_at(pot, Eigen::VectorXcd::Zero(2));
  CHECK_THROWS_AS(real_frame_components(T, Eigen::VectorXd::Zero(4)), ValidationError);
  CHECK_THROWS_AS(curvature_jets_along(pot, Eigen::VectorXcd::Zero(2), Eigen::VectorXd::Zero(4), 2), ValidationError);
}

TEST_CASE("curvature jets") {
  std::mt19937_64 rng(8);
  SUBCASE("flat") {
    const CurvatureJets j = curvature_jets_along(catalog::flat(2), Eigen::VectorXcd::Zero(2), dx1(2), 4);
    for (const auto& R : j.R) CHECK(R.norm() == 0.0);
  }
  SUBCASE("space form is parallel") {
    for (double K : {-3.0, 3.0}) {
      auto field = std::make_shared<SpaceFormMetricField>(2, K);
      const Eigen::VectorXd e0 = kt::random_direction(rng, 2);
      const Eigen::VectorXcd p = kt::random_point(rng, 2, 0.1);
      const CurvatureJets j = curvature_jets_along(field, p, e0, 4);
      CHECK(j.R[1].cwiseAbs().maxCoeff() < 1e-7);
      CHECK(j.R[2].cwiseAbs().maxCoeff() < 1e-7);
      CHECK(j.R[3].cwiseAbs().maxCoeff() < 1e-5);
      CHECK(j.R[4].cwiseAbs().maxCoeff() < 1e-5);
    }
  }
  SUBCASE("section6 Ricci jets vanish at the origin") {
    const auto pot = catalog::section6(0.1, 50.0);
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd e0 = kt::random_direction(rng, 2);
      const CurvatureJets j = curvature_jets_along(pot, Eigen::VectorXcd::Zero(2), e0, 4);
      CHECK(std::abs(j.ricci[1]) < 1e-7);
      CHECK(std::abs(j.ricci[2]) < 1e-7);
      const RealFrameCurvature F = real_frame_components(curvature_at(pot, Eigen::VectorXcd::Zero(2)), e0);
      CHECK((j.R[0] - F.R).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("derivative along the ray matches a direct difference of the parallel-frame curvature") {
    // Off-origin base point: R' is nonzero for section6.
    const auto pot = catalog::section6(0.1, 50.0);
    Eigen::VectorXcd p(2);
    p << std::complex<double>(0.01, 0.004), std::complex<double>(-0.006, 0.002);
    const CurvatureJets j = curvature_jets_along(pot, p, dx1(2), 2);
    CHECK(j.R[1].cwiseAbs().maxCoeff() > 1e-3);
    CHECK(j.error_estimate[1] < 1e-7);
    CHECK(j.error_estimate[2] < 1e-6);
  }
  SUBCASE("order above the configured maximum") {
    CHECK_THROWS_AS(curvature_jets_along(catalog::flat(2), Eigen::VectorXcd::Zero(2), dx1(2), 5), ValidationError);
  }
}
