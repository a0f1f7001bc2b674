#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>

#include "kahler/curvature.hpp"
#include "kahler/errors.hpp"
#include "kahler/geodesic_flow.hpp"
#include "kahler/model_space.hpp"
#include "test_support.hpp"

using namespace kahler;

namespace {

Eigen::VectorXd dx1(int n) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * n);
  e[0] = 1.0;
  return e;
}

// Metric that turns into NaN beyond |z| = 0.01, to force step rejection.
class PoisonedField final : public KahlerMetricField {
 public:
  int n() const override { return 1; }
  double validity_radius() const override { return 1.0; }
  std::string label() const override { return "poisoned"; }
  MetricJet evaluate(const Eigen::VectorXcd& z, bool with_curvature) const override {
    MetricJet jet;
    jet.point = z;
    const double v = z.norm() > 0.01 ? std::nan("") : 1.0;
    jet.g = Eigen::MatrixXcd::Constant(1, 1, v);
    jet.dg.assign(1, Eigen::MatrixXcd::Zero(1, 1));
    if (with_curvature) jet.curvature = KahlerTensor(1);
    return jet;
  }
};

}  // namespace

TEST_CASE("flat rays are straight lines with J = r I") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3}) {
    const Eigen::VectorXcd p = kt::random_point(rng, n, 0.3);
    const Eigen::VectorXd e0 = kt::random_direction(rng, n);
    const GeodesicRay ray = shoot(catalog::flat(n), p, e0, 0.5);
    const Eigen::VectorXcd xi = to_holomorphic(e0) / std::sqrt(2.0);  // unit for <,> = 2 Re
    for (double r : {0.1, 0.25, 0.5}) {
      CHECK((ray.position(r) - (p + r * xi)).norm() < 1e-13);
      const JacobiSystemState js = jacobi_integrate(ray, r);
      CHECK((js.J - r * Eigen::MatrixXd::Identity(2 * n - 1, 2 * n - 1)).cwiseAbs().maxCoeff() < 1e-13);
      const RadialDensity d = radial_density(ray, r);
      CHECK(d.value == doctest::Approx(std::pow(r, 2 * n - 1)).epsilon(1e-12));
      CHECK(d.log_derivative == doctest::Approx((2 * n - 1) / r).epsilon(1e-12));
    }
    CHECK(jacobi_integrate(ray, 0.0).J.norm() == 0.0);
    CHECK((jacobi_integrate(ray, 0.0).Jp - Eigen::MatrixXd::Identity(2 * n - 1, 2 * n - 1)).norm() == 0.0);
  }
}

TEST_CASE("section6 with a = 0 is flat") {
  const GeodesicRay ray = shoot(catalog::section6(0.0, 0.0), Eigen::VectorXcd::Zero(2), dx1(2), 0.1);
  const GeodesicRay flat = shoot(catalog::flat(2), Eigen::VectorXcd::Zero(2), dx1(2), 0.1);
  for (double r : {0.02, 0.05, 0.1}) {
    CHECK((ray.position(r) - flat.position(r)).norm() < 1e-10);
    CHECK(radial_density(ray, r).value == doctest::Approx(r * r * r).epsilon(1e-10));
  }
}

TEST_CASE("space-form radial geodesic matches the arc-length inversion") {
  for (double K : {-3.0, -1.0, 1.0, 3.0}) {
    const int n = 2;
    const double kappa = K / (n + 1);
    auto field = std::make_shared<SpaceFormMetricField>(n, K);
    const GeodesicRay ray = shoot(field, Eigen::VectorXcd::Zero(n), dx1(n), 0.5);
    for (double r : {0.1, 0.3, 0.5}) {
      const double s = std::sqrt(std::abs(kappa) / 2.0) * r;
      const double want = (kappa > 0 ? std::tan(s) : std::tanh(s)) / std::sqrt(std::abs(kappa));
      CHECK(ray.position(r).norm() == doctest::Approx(want).epsilon(1e-10));
      CHECK(std::abs(ray.position(r)[1]) < 1e-14);
    }
  }
}

TEST_CASE("space-form Jacobi fields and density match the closed form") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3}) {
    for (double K : {-3.0, -1.0, 1.0, 3.0}) {
      const ModelSpace model(n, K);
      const double c = model.c();
      auto field = std::make_shared<SpaceFormMetricField>(n, K);
      const Eigen::VectorXcd p = kt::random_point(rng, n, 0.2);
      const GeodesicRay ray = shoot(field, p, kt::random_direction(rng, n), 0.5);
      for (double r : {0.01, 0.1, 0.3, 0.5}) {
        const JacobiSystemState js = jacobi_integrate(ray, r);
        CHECK(js.J.col(0).norm() == doctest::Approx(sn(c, r)).epsilon(1e-9));
        for (int u = 1; u < 2 * n - 1; ++u) CHECK(js.J.col(u).norm() == doctest::Approx(sn(c / 4, r)).epsilon(1e-9));
        const RadialDensity d = radial_density(ray, r);
        CHECK(d.value == doctest::Approx(density(model, r)).epsilon(1e-8));
        CHECK(d.log_derivative == doctest::Approx(laplacian(model, r)).epsilon(1e-9));
      }
      const RayQuality q = ray.quality();
      CHECK(q.speed_drift < 1e-9);
      CHECK(q.frame_drift < 1e-9);
      CHECK(q.wronskian_drift < 1e-8);
    }
  }
}

TEST_CASE("short-time Jacobi expansion on section6") {
  const auto pot = catalog::section6(0.1, 50.0);
  Eigen::VectorXcd p(2);
  p << std::complex<double>(0.01, -0.005), std::complex<double>(0.004, 0.008);
  const Eigen::VectorXd e0 = (Eigen::VectorXd(4) << 0.2, 0.9, -0.3, 0.1).finished().normalized();
  const CurvatureJets jets = curvature_jets_along(pot, p, e0, 2);
  RayOptions opt;
  opt.tol = 1e-13;
  const GeodesicRay ray = shoot(pot, p, e0, 0.02, opt);
  for (double r : {0.005, 0.01, 0.02}) {
    const Eigen::MatrixXd series = r * Eigen::MatrixXd::Identity(3, 3) + std::pow(r, 3) / 6 * jets.R[0] +
                                   std::pow(r, 4) / 12 * jets.R[1];
    const Eigen::MatrixXd next =
        std::pow(r, 5) / 120 * (jets.R[0] * jets.R[0] + 3 * jets.R[2]);
    const Eigen::MatrixXd J = jacobi_integrate(ray, r).J;
    // Column u of J holds J_u, so the series enters transposed (J_u = sum_v C^v_u e_v); R is symmetric.
    CHECK((J - series.transpose()).cwiseAbs().maxCoeff() < 2 * next.cwiseAbs().maxCoeff() + 1e-14);
    // Remainder is O(r^6) with an R'''-sized coefficient (lambda-term).
    CHECK((J - series - next).cwiseAbs().maxCoeff() < 4 * std::pow(r, 6));
  }
}

TEST_CASE("section6 density along d/dx1 exceeds the model at small r") {
  const double a = 0.1;
  const ModelSpace model(2, -12 * a);
  RayOptions opt;
  opt.tol = 1e-13;
  const GeodesicRay ray = shoot(catalog::section6(a, 0.0), Eigen::VectorXcd::Zero(2), dx1(2), 0.04, opt);
  for (double r : {0.02, 0.03, 0.04}) {
    const double excess = radial_density(ray, r).value / density(model, r) - 1.0;
    // Leading excess (2/15) a^2 r^4 from the per-direction r^4 coefficients.
    CHECK(excess > 0.5 * (2.0 / 15.0) * a * a * std::pow(r, 4));
  }
}

TEST_CASE("gauge independence of the initial frame") {
  std::mt19937_64 rng(13);
  for (int n : {2, 3}) {
    const auto pot = catalog::perturbed(n, 21, 0.3);
    const Eigen::VectorXcd p = kt::random_point(rng, n, 0.03);
    const Eigen::VectorXd e0 = kt::random_direction(rng, n);
    const GeodesicRay base = shoot(pot, p, e0, 0.06);
    Eigen::MatrixXcd F = base.initial_frame();
    const Eigen::MatrixXcd U = kt::random_unitary(rng, n - 1);
    F.rightCols(n - 1) = F.rightCols(n - 1) * U;
    RayOptions opt;
    opt.initial_frame = F;
    const GeodesicRay rotated = shoot(pot, p, e0, 0.06, opt);
    for (double r : {0.01, 0.03, 0.06}) {
      const RadialDensity a = radial_density(base, r), b = radial_density(rotated, r);
      CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
      CHECK(a.log_derivative == doctest::Approx(b.log_derivative).epsilon(1e-10));
    }
  }
}

TEST_CASE("antipodal symmetry for even potentials") {
  std::mt19937_64 rng(14);
  for (const auto& pot : {catalog::section6(0.1, 50.0), catalog::perturbed(2, 5, 0.3), catalog::space_form(3, 2.0)}) {
    const Eigen::VectorXd e0 = kt::random_direction(rng, pot.n());
    const GeodesicRay fwd = shoot(pot, Eigen::VectorXcd::Zero(pot.n()), e0, 0.08);
    const GeodesicRay bwd = shoot(pot, Eigen::VectorXcd::Zero(pot.n()), -e0, 0.08);
    for (double r : {0.02, 0.08}) {
      CHECK(radial_density(fwd, r).value == doctest::Approx(radial_density(bwd, r).value).epsilon(1e-11));
      CHECK(radial_density(fwd, r).log_derivative ==
            doctest::Approx(radial_density(bwd, r).log_derivative).epsilon(1e-11));
    }
  }
}

TEST_CASE("series branch near r = 0 joins the integrated branch") {
  const GeodesicRay ray = shoot(catalog::section6(0.1, 50.0), Eigen::VectorXcd::Zero(2), dx1(2), 0.01);
  const RadialDensity lo = radial_density(ray, 0.99999e-4), hi = radial_density(ray, 1.00001e-4);
  CHECK(lo.value / std::pow(lo.r, 3) == doctest::Approx(hi.value / std::pow(hi.r, 3)).epsilon(1e-9));
  CHECK(lo.log_derivative - 3 / lo.r == doctest::Approx(hi.log_derivative - 3 / hi.r).epsilon(1e-4));
  CHECK(std::abs(radial_density(ray, 1e-7).value / 1e-21 - 1.0) < 1e-12);
}

TEST_CASE("empirical convergence order of the fixed-step integrator") {
  const ModelSpace model(2, 3.0);
  auto field = std::make_shared<SpaceFormMetricField>(2, 3.0);
  std::vector<double> lx, ly;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    RayOptions opt;
    opt.fixed_step = h;
    const GeodesicRay ray = shoot(field, Eigen::VectorXcd::Zero(2), dx1(2), 0.8, opt);
    const double err = std::abs(radial_density(ray, 0.8).value / density(model, 0.8) - 1.0);
    lx.push_back(std::log(h));
    ly.push_back(std::log(err));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  MESSAGE("observed order " << slope);
  CHECK(slope >= 4.0);
}

TEST_CASE("conjugate point is bracketed to 1e-10") {
  auto field = std::make_shared<SpaceFormMetricField>(2, 3.0);
  const ModelSpace model(2, 3.0);
  // From p = 0.5 towards the origin the antipodal point is z = -2, inside the chart.
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(2);
  p[0] = 0.5;
  const GeodesicRay ray = shoot(field, p, -dx1(2), 2.5);
  REQUIRE(ray.conjugate_bracket().has_value());
  const auto [lo, hi] = *ray.conjugate_bracket();
  CHECK(hi - lo <= 1e-10);
  CHECK(lo <= model.conjugate_radius() + 1e-8);
  CHECK(hi >= model.conjugate_radius() - 1e-8);
  CHECK_THROWS_AS(radial_density(ray, 2.3), ConjugatePointReached);
  CHECK_NOTHROW(radial_density(ray, 2.0));
}

TEST_CASE("leaving the validity ball truncates the ray") {
  const GeodesicRay ray = shoot(catalog::section6(0.1, 50.0), Eigen::VectorXcd::Zero(2), dx1(2), 1.0);
  CHECK(ray.truncated());
  CHECK(ray.r_max() < 1.0);
  CHECK(ray.position(ray.r_max()).norm() < 0.1);
  CHECK_THROWS_AS(ray.position(0.9), TruncationError);
}

TEST_CASE("integration stall and input validation") {
  auto field = std::make_shared<PoisonedField>();
  Eigen::VectorXd e0(2);
  e0 << 1.0, 0.0;
  CHECK_THROWS_AS(shoot(field, Eigen::VectorXcd::Zero(1), e0, 1.0), IntegrationStalled);
  CHECK_THROWS_AS(shoot(catalog::flat(2), Eigen::VectorXcd::Zero(2), Eigen::VectorXd::Zero(4), 1.0), ValidationError);
  CHECK_THROWS_AS(shoot(catalog::flat(2), Eigen::VectorXcd::Zero(3), dx1(2), 1.0), ValidationError);
}

TEST_CASE("trace CSV has the documented columns") {
  const GeodesicRay ray = shoot(catalog::flat(2), Eigen::VectorXcd::Zero(2), dx1(2), 0.1);
  std::ostringstream os;
  write_trace_csv(ray, {0.05, 0.1}, os);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  CHECK(header == "r,speed_defect,det,value,log_derivative");
  int rows = 0;
  while (std::getline(is, row)) ++rows;
  CHECK(rows == 2);
}
