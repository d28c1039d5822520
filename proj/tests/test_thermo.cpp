#include "doctest.h"
#include "nhfermion/errors.hpp"
#include "nhfermion/thermo.hpp"

#include <gsl/gsl_sf_dilog.h>

#include <cmath>
#include <numbers>

using namespace nhf;

namespace {

// Plain sums with no cutoff logic, used as the oracle for the exact method.
struct Brute {
  double log_z = 0.0, number = 0.0, energy = 0.0;
};

Brute brute_force(const ModelParams& p, double beta, double mu, int terms) {
  Brute b;
  for (int k = 1; k <= terms; ++k) {
    const double lambda = p.lambda_scale * (4.0 * k - 3.0) / 4.0;
    const double x = beta * (lambda - mu);
    b.log_z += std::log1p(std::exp(-x));
    b.number += 1.0 / (std::exp(x) + 1.0);
    b.energy += lambda / (std::exp(x) + 1.0);
  }
  return b;
}

}  // namespace

TEST_CASE("dilog against reference values") {
  CHECK(dilog(0.0) == 0.0);
  CHECK(dilog(-1.0) == doctest::Approx(-std::numbers::pi * std::numbers::pi / 12.0).epsilon(1e-15));
  CHECK(dilog(1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-15));
  // mpmath polylog(2, x)
  CHECK(dilog(-5.0) == doctest::Approx(-2.7492791260608082900).epsilon(1e-14));
  CHECK(dilog(-0.7) == doctest::Approx(-0.60515840233770528397).epsilon(1e-14));
  CHECK(dilog(-0.3) == doctest::Approx(-0.28007433375958290423).epsilon(1e-14));
  CHECK(dilog(0.3) == doctest::Approx(0.32612951007547606953).epsilon(1e-14));
  CHECK(dilog(0.8) == doctest::Approx(1.0747946000082483594).epsilon(1e-14));
  CHECK(dilog(0.999) == doctest::Approx(1.6370226052761177427).epsilon(1e-14));
  CHECK(dilog(0.5) == doctest::Approx(std::numbers::pi * std::numbers::pi / 12.0 -
                                      0.5 * std::log(2.0) * std::log(2.0))
                          .epsilon(1e-15));
}

TEST_CASE("dilog agrees with GSL across the real branch") {
  for (double x = -1e6; x <= 1.0; x = x < -1.0 ? x / 1.7 : x + 0.0137) {
    CHECK(std::abs(dilog(x) - gsl_sf_dilog(x)) <= 1e-12 * std::max(1.0, std::abs(gsl_sf_dilog(x))));
  }
}

TEST_CASE("dilog is monotone on the negative axis and rejects x > 1") {
  double prev = dilog(-1e-3);
  for (double x = -0.01; x >= -20.0; x *= 1.3) {
    const double v = dilog(x);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(dilog(1.0001), DomainError);
  CHECK_THROWS_AS(dilog(std::nan("")), DomainError);
}

TEST_CASE("exact sums against brute force") {
  const ModelParams p0 = make_params(0.0);
  CHECK(exact_log_z(p0, 50.0, 0.0) == doctest::Approx(std::log1p(std::exp(-12.5))).epsilon(1e-12));
  const Brute b1 = brute_force(p0, 1.0, 0.0, 10000);
  CHECK(exact_log_z(p0, 1.0, 0.0) == doctest::Approx(b1.log_z).epsilon(1e-13));
  CHECK(exact_log_z(p0, 1.0, 800.0) == 0.0);

  const ModelParams p = make_params(0.6);
  const ThermoPoint t = exact_expectations(p, 0.2, 0.0);
  const Brute b = brute_force(p, 0.2, 0.0, 100000);
  CHECK(std::abs(t.number - b.number) <= 1e-9 * b.number);
  CHECK(std::abs(t.energy - b.energy) <= 1e-9 * b.energy);
  CHECK(std::abs(t.log_z - b.log_z) <= 1e-9 * b.log_z);

  // mpmath nsum at beta = 0.05, mu = 2
  const ThermoPoint m = exact_expectations(p, 0.05, 2.0);
  CHECK(m.log_z == doctest::Approx(13.824036300564655167).epsilon(1e-13));
  CHECK(m.number == doctest::Approx(11.483017514574028137).epsilon(1e-13));
  CHECK(m.energy == doctest::Approx(272.77358925554030874).epsilon(1e-13));
}

TEST_CASE("low-temperature limits") {
  const ModelParams p0 = make_params(0.0);
  const ThermoPoint frozen = exact_expectations(p0, 50.0, 0.0);
  CHECK(frozen.number < 1e-5);
  CHECK(frozen.energy < 1e-5);
  const ThermoPoint single = exact_expectations(p0, 50.0, 1.0);
  // the second level contributes 1.25 / (e^12.5 + 1) ~ 5e-6
  CHECK(single.number == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(single.energy == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(single.entropy >= 0.0);
}

TEST_CASE("tail tolerance bounds the truncation error") {
  const ModelParams p = make_params(0.6);
  const double tight = exact_log_z(p, 0.01, 0.0, 1e-30);
  for (double tol : {1e-6, 1e-9, 1e-13}) {
    CHECK(std::abs(exact_log_z(p, 0.01, 0.0, tol) - tight) <= tol);
  }
  CHECK_THROWS_AS(exact_log_z(p, 0.01, 0.0, 0.0), DomainError);
}

TEST_CASE("exact averages are log Z derivatives") {
  const ModelParams p = make_params(0.6);
  const double beta = 0.05, mu = 3.0, zeta = -beta * mu;
  const ThermoPoint t = exact_expectations(p, beta, mu, 1e-30);
  const double h = 1e-5;
  const double e_fd = -(exact_log_z(p, beta + h, zeta, 1e-30) -
                        exact_log_z(p, beta - h, zeta, 1e-30)) / (2.0 * h);
  const double n_fd = -(exact_log_z(p, beta, zeta + h, 1e-30) -
                        exact_log_z(p, beta, zeta - h, 1e-30)) / (2.0 * h);
  CHECK(std::abs(e_fd - t.energy) <= 1e-5 * t.energy);
  CHECK(std::abs(n_fd - t.number) <= 1e-5 * t.number);
  CHECK(exact_mode_entropy(p, beta, mu, 1e-30) == doctest::Approx(t.entropy).epsilon(1e-12));
}

TEST_CASE("monotonicity of the particle number") {
  const ModelParams p = make_params(0.6);
  double prev = 0.0;
  for (double mu = -10.0; mu <= 10.0; mu += 0.5) {
    const double n = exact_expectations(p, 0.3, mu).number;
    CHECK(n > prev);
    prev = n;
  }
  prev = 1e300;
  for (double beta = 0.01; beta <= 2.0; beta *= 1.5) {
    const double n = exact_expectations(p, beta, 0.0).number;
    CHECK(n < prev);
    prev = n;
  }
}

TEST_CASE("Euler-Maclaurin approximation") {
  const ModelParams p = make_params(0.6);
  SUBCASE("accuracy at high temperature") {
    const double exact = exact_log_z(p, 0.01, 0.0);
    CHECK(std::abs(em_log_z(p, 0.01, 0.0) - exact) <= 1e-4 * exact);
    const ThermoPoint ex = exact_expectations(p, 0.01, 0.0);
    const ThermoPoint em = em_expectations(p, 0.01, 0.0);
    CHECK(std::abs(em.energy - ex.energy) <= 1e-3 * ex.energy);
    CHECK(std::abs(em.number - ex.number) <= 1e-3 * ex.number);
  }
  SUBCASE("degrades as the temperature drops") {
    auto rel = [&](double beta) {
      const double exact = exact_log_z(p, beta, 0.0);
      return std::abs(em_log_z(p, beta, 0.0) - exact) / exact;
    };
    CHECK(rel(0.2) > rel(0.01));
  }
  SUBCASE("deep negative chemical potential") {
    for (double mu : {-6000.0, -5000.0, -4500.0}) {
      const ThermoPoint ex = exact_expectations(p, 0.001, mu);
      const ThermoPoint em = em_expectations(p, 0.001, mu);
      // each level is nearly empty, but about 1 / (beta L) of them contribute
      CHECK(ex.number < 10.0);
      CHECK(std::abs(em.number - ex.number) <= 1e-3 * ex.number);
      CHECK(std::abs(em.energy - ex.energy) <= 1e-3 * ex.energy);
    }
  }
  SUBCASE("empty limit") {
    CHECK(std::abs(em_log_z(p, 0.1, 800.0)) < 1e-300);
    const ThermoPoint em = em_expectations(p, 0.1, -8000.0);
    CHECK(em.number == doctest::Approx(0.0));
    CHECK(em.energy == doctest::Approx(0.0));
  }
  SUBCASE("analytic derivatives match finite differences of em_log_z") {
    for (double mu : {-30.0, 0.0, 25.0}) {
      const double beta = 0.02, zeta = -beta * mu;
      const ThermoPoint t = em_expectations(p, beta, mu);
      const double hb = 1e-6 * beta;
      const double e_fd = -(em_log_z(p, beta + hb, zeta) - em_log_z(p, beta - hb, zeta)) / (2 * hb);
      const double hz = 1e-6;
      const double n_fd = -(em_log_z(p, beta, zeta + hz) - em_log_z(p, beta, zeta - hz)) / (2 * hz);
      CHECK(std::abs(e_fd - t.energy) <= 1e-6 * std::abs(t.energy));
      CHECK(std::abs(n_fd - t.number) <= 1e-6 * std::abs(t.number));
    }
  }
  SUBCASE("both branches of the inversion agree at zeta' = 0") {
    const double a = 0.75 * p.lambda_scale * 0.01;
    const double left = em_log_z(p, 0.01, a - 1e-12);
    const double right = em_log_z(p, 0.01, a + 1e-12);
    CHECK(std::abs(left - right) <= 1e-9 * std::abs(left));
  }
}

TEST_CASE("thermo input validation") {
  const ModelParams p = make_params(0.6);
  CHECK_THROWS_AS(exact_expectations(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(exact_expectations(p, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(em_expectations(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(em_log_z(p, 0.1, std::nan("")), DomainError);
  CHECK(to_string(Method::Exact) == "exact");
  CHECK(to_string(Method::EulerMaclaurin) == "euler_maclaurin");
  CHECK(thermo_point(p, 0.1, 0.0, Method::EulerMaclaurin).method == Method::EulerMaclaurin);
}
