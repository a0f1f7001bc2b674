#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "kahler/errors.hpp"
#include "kahler/model_space.hpp"

using namespace kahler;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("flat model") {
  const ModelSpace m(2, 0.0);
  CHECK(std::isinf(m.conjugate_radius()));
  for (double r : {0.1, 1.0, 3.0}) {
    CHECK(density(m, r) == doctest::Approx(r * r * r).epsilon(1e-15));
    CHECK(laplacian(m, r) == doctest::Approx(3.0 / r).epsilon(1e-14));
    CHECK(sphere_area(m, r) == doctest::Approx(2 * pi * pi * r * r * r).epsilon(1e-14));
    CHECK(ball_volume(m, r) == doctest::Approx(pi * pi * std::pow(r, 4) / 2).epsilon(1e-12));
  }
  const double a = 0.3, b = 0.7;
  CHECK(ball_volume(m, b) / ball_volume(m, a) == doctest::Approx(std::pow(b / a, 4)).epsilon(1e-12));
  const ModelSpace m3(3, 0.0);
  CHECK(ball_volume(m3, 1.0) == doctest::Approx(pi * pi * pi / 6).epsilon(1e-12));
}

TEST_CASE("positive and negative curvature closed forms") {
  const ModelSpace m(2, 3.0);  // c = 2
  CHECK(m.c() == doctest::Approx(2.0));
  CHECK(m.conjugate_radius() == doctest::Approx(pi / std::sqrt(2.0)));
  const double r = 0.7;
  const double want = std::sin(std::sqrt(2.0) * r) / std::sqrt(2.0) * std::pow(std::sin(std::sqrt(0.5) * r) / std::sqrt(0.5), 2);
  CHECK(density(m, r) == doctest::Approx(want).epsilon(1e-14));

  const ModelSpace h(2, -3.0);
  const double wh = std::sinh(std::sqrt(2.0) * r) / std::sqrt(2.0) * std::pow(std::sinh(std::sqrt(0.5) * r) / std::sqrt(0.5), 2);
  CHECK(density(h, r) == doctest::Approx(wh).epsilon(1e-14));
  CHECK(density(h, r) > r * r * r);
  CHECK(density(m, r) < r * r * r);
}

TEST_CASE("laplacian is the log-derivative of the density") {
  for (int n : {2, 3})
    for (double K : {-2.0, 1.0, 4.0}) {
      const ModelSpace m(n, K);
      for (double r : {1e-4, 5e-4, 2e-3, 0.05, 0.4, 1.0}) {
        const double h = 1e-6 * r;
        const double fd = (std::log(density(m, r + h)) - std::log(density(m, r - h))) / (2 * h);
        CHECK(laplacian(m, r) == doctest::Approx(fd).epsilon(1e-8));
      }
      // Branch join of the small-r series.
      const double lo = 1e-3 * (1 - 1e-12), hi = 1e-3 * (1 + 1e-12);
      CHECK(lo * laplacian(m, lo) == doctest::Approx(hi * laplacian(m, hi)).epsilon(1e-13));
    }
}

TEST_CASE("area grows with the density and volume integrates it") {
  const ModelSpace m(3, 2.0);
  const double r = 0.8, h = 1e-5;
  const double dlog_area = (std::log(sphere_area(m, r + h)) - std::log(sphere_area(m, r - h))) / (2 * h);
  CHECK(dlog_area == doctest::Approx(laplacian(m, r)).epsilon(1e-8));
  const double dvol = (ball_volume(m, r + h) - ball_volume(m, r - h)) / (2 * h);
  CHECK(dvol == doctest::Approx(sphere_area(m, r)).epsilon(1e-8));
}

TEST_CASE("scaling law") {
  for (int n : {2, 3})
    for (double K : {-1.0, 2.0}) {
      const double s = 1.7, r = 0.4;
      const ModelSpace m(n, K), ms(n, K / (s * s));
      CHECK(density(ms, s * r) == doctest::Approx(std::pow(s, 2 * n - 1) * density(m, r)).epsilon(1e-13));
      CHECK(ball_volume(ms, s * r) == doctest::Approx(std::pow(s, 2 * n) * ball_volume(m, r)).epsilon(1e-11));
    }
}

TEST_CASE("real space form reduces to the flat density") {
  CHECK(real_space_form_density(4, 0.0, 0.5) == doctest::Approx(0.125));
  CHECK(real_space_form_density(4, 1.0, 0.5) == doctest::Approx(std::pow(std::sin(0.5), 3)));
}

TEST_CASE("model series coefficients") {
  for (int n : {2, 3})
    for (double K : {-3.0, 1.5}) {
      const ModelSpace m(n, K);
      const SeriesExpansion s = model_series(m, 8);
      CHECK(s.provenance == "closed_form");
      CHECK(s[0] == doctest::Approx(unit_sphere_volume(n)).epsilon(1e-15));
      for (int k = 1; k <= 7; k += 2) CHECK(s[k] == 0.0);
      // c2 = -Vol * K / 6 for any metric with Ric = K.
      CHECK(s[2] == doctest::Approx(-unit_sphere_volume(n) * K / 6).epsilon(1e-13));
      // Compare the truncated series against W(r) at small radii.
      for (double r : {0.02, 0.05}) {
        const double W = unit_sphere_volume(n) * density(m, r) / std::pow(r, 2 * n - 1);
        double S = 0.0;
        for (int k = 8; k >= 0; --k) S = S * r + s[k];
        CHECK(std::abs(W - S) < 1e-3 * std::pow(std::abs(m.c()) * r * r, 5) + 1e-14 * W);
      }
    }
  CHECK_THROWS_AS(model_series(ModelSpace(2, 1.0), 9), ValidationError);
}

TEST_CASE("domain errors") {
  const ModelSpace m(2, 3.0);
  CHECK_THROWS_AS(density(m, -0.1), ModelDomainError);
  CHECK_THROWS_AS(density(m, m.conjugate_radius()), ModelDomainError);
  CHECK_THROWS_AS(laplacian(m, 0.0), ModelDomainError);
  CHECK_THROWS_AS(ModelSpace(0, 1.0), ValidationError);
  std::ostringstream os;
  write_model_table(m, {0.5, 1.0, 3.0}, os);
  const std::string out = os.str();
  CHECK(out.rfind("r,density,area,volume,laplacian\n", 0) == 0);
  CHECK(out.find("3,domain_error,domain_error,domain_error,domain_error") != std::string::npos);
}
