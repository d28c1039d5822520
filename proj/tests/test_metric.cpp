#include "doctest.h"
#include "nhfermion/errors.hpp"
#include "nhfermion/metric.hpp"

#include <cmath>

using namespace nhf;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd x_operator(int dim) {
  const Generators g = build_generators(dim);
  return g.splus.entries + g.sminus.entries;
}

}  // namespace

TEST_CASE("matrix exponentials on trivial inputs") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  CHECK(max_abs(sym_exp(zero, 3.0) - Eigen::MatrixXd::Identity(4, 4)) == 0.0);
  CHECK(max_abs(exp_nonnegative(zero, 3.0) - Eigen::MatrixXd::Identity(4, 4)) == 0.0);

  Eigen::MatrixXd d(2, 2);
  d << 1.0, 0.0, 0.0, -1.0;
  const Eigen::MatrixXd e = sym_exp(d, 1.0);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(e(0, 1) == 0.0);
}

TEST_CASE("exponential of a rotation generator") {
  Eigen::MatrixXd j(2, 2);
  j << 0.0, 1.0, 1.0, 0.0;
  const Eigen::MatrixXd e = exp_nonnegative(j, 0.7);
  CHECK(e(0, 0) == doctest::Approx(std::cosh(0.7)).epsilon(1e-15));
  CHECK(e(0, 1) == doctest::Approx(std::sinh(0.7)).epsilon(1e-15));
  const Eigen::MatrixXd p = exp_pade(j, 0.7);
  CHECK(max_abs(p - e) < 4e-15);
}

TEST_CASE("three exponentials agree on the metric generator") {
  const int dim = 40;
  const double t = 2.0 * make_params(0.6).alpha;
  const Eigen::MatrixXd x = x_operator(dim);
  const Eigen::MatrixXd pade = exp_pade(x, t);
  const Eigen::MatrixXd sym = sym_exp(x, t);
  const Eigen::MatrixXd taylor = exp_nonnegative(x, t);
  const Eigen::Index b = 20;
  const double scale = max_abs(pade);
  // sym_exp is accurate normwise, not entrywise
  CHECK(max_abs((sym - pade).topLeftCorner(b, b)) / scale <= 1e-10);
  const Eigen::MatrixXd rel = (taylor - pade).cwiseQuotient(pade).topLeftCorner(b, b);
  CHECK(max_abs(rel) <= 1e-12);
}

TEST_CASE("exponential input validation") {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(sym_exp(a, 1.0), DomainError);
  CHECK_THROWS_AS(sym_exp(Eigen::MatrixXd::Zero(2, 3), 1.0), DomainError);
  CHECK_THROWS_AS(exp_nonnegative(-a, 1.0), DomainError);
  CHECK_THROWS_AS(exp_nonnegative(a, -1.0), DomainError);
}

TEST_CASE("metric is the identity at gamma = 0") {
  const MetricOperator m = build_metric(make_params(0.0), 20);
  CHECK(max_abs(m.d2 - Eigen::MatrixXd::Identity(20, 20)) == 0.0);
  CHECK(max_abs(m.d - Eigen::MatrixXd::Identity(20, 20)) == 0.0);
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(20, -1.0, 2.0);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(20, 3.0, 0.5);
  CHECK(physical_inner(m, u, v) == doctest::Approx(u.dot(v)).epsilon(1e-15));
}

TEST_CASE("metric hermitizes H on the interior block") {
  const ModelParams p = make_params(0.6);
  const int dim = 60;
  const MetricOperator m = build_metric(p, dim);
  CHECK(metric_interior(dim) == 30);
  CHECK(metric_interior(7) == 4);
  CHECK(hermitization_residual(m, build_hamiltonian(p, dim)) <= 1e-8);
  // D is symmetric and squares to D2 away from the cut
  CHECK(max_abs(m.d - m.d.transpose()) <= 1e-15 * max_abs(m.d));
  CHECK(relative_block_residual(m.d * m.d - m.d2, m.d2, 20) <= 1e-13);
  // D H D^-1 is symmetric, tested on the small block where D is well conditioned
  const Eigen::Index b = 10;
  const Eigen::MatrixXd h = build_hamiltonian(p, dim).entries;
  const Eigen::MatrixXd dh = m.d * h;
  const Eigen::MatrixXd hd = h.transpose() * m.d;
  CHECK(relative_block_residual(m.d * dh - hd * m.d, m.d2, b) <= 1e-10);
}

TEST_CASE("negative gamma uses the mirrored metric") {
  const ModelParams p = make_params(-0.6);
  const MetricOperator m = build_metric(p, 40);
  CHECK(hermitization_residual(m, build_hamiltonian(p, 40)) <= 1e-8);
  const MetricOperator mp = build_metric(make_params(0.6), 40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    for (Eigen::Index j = 0; j < 40; ++j) {
      const double sign = (i + j) % 2 ? -1.0 : 1.0;
      CHECK(m.d2(i, j) == doctest::Approx(sign * mp.d2(i, j)).epsilon(1e-14));
    }
  }
}

TEST_CASE("metric maps right eigenvectors to left ones") {
  const ModelParams p = make_params(0.6);
  const MetricOperator m = build_metric(p, 60);
  const BiorthogonalSystem s = build_biorthogonal(p, 60, 3, 1e-8);
  CHECK(physical_inner(m, s.right.col(0), s.right.col(0)) > 0.0);
  const double cross = physical_inner(m, s.right.col(0), s.right.col(1));
  const double n0 = std::sqrt(physical_inner(m, s.right.col(0), s.right.col(0)));
  const double n1 = std::sqrt(physical_inner(m, s.right.col(1), s.right.col(1)));
  CHECK(std::abs(cross) / (n0 * n1) <= 1e-8);
  CHECK_THROWS_AS(physical_inner(m, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(60)),
                  DomainError);
}

TEST_CASE("conjugated generators are the T operators") {
  const ModelParams p = make_params(0.6);
  const int dim = 60;
  const LadderOperators t = build_t_operators(p, dim);
  const Eigen::Index b = metric_interior(dim);
  CHECK(leading_block_max_abs(conjugate_generator(p, dim, Generator::S0).entries - t.t0.entries,
                              b) <= 1e-8);
  CHECK(leading_block_max_abs(
            conjugate_generator(p, dim, Generator::Splus).entries - t.tplus.entries, b) <= 1e-8);
  CHECK(leading_block_max_abs(
            conjugate_generator(p, dim, Generator::Sminus).entries - t.tminus.entries, b) <= 1e-8);
  const Generators g = build_generators(10);
  CHECK(max_abs(conjugate_generator(make_params(0.0), 10, Generator::S0).entries -
                g.s0.entries) == 0.0);
}
