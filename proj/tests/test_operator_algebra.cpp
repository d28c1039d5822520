#include "doctest.h"
#include "nhfermion/errors.hpp"
#include "nhfermion/operator_algebra.hpp"

#include <cmath>

using namespace nhf;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("generators have the documented entries") {
  const Generators g2 = build_generators(2);
  CHECK(g2.splus.entries(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g2.sminus.entries(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  const Generators g3 = build_generators(3);
  CHECK(g3.s0.entries.diagonal()(0) == 0.25);
  CHECK(g3.s0.entries.diagonal()(1) == 1.25);
  CHECK(g3.s0.entries.diagonal()(2) == 2.25);
  CHECK(g3.sminus.entries == g3.splus.entries.transpose());
  CHECK(ladder_weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ladder_weight(3) == doctest::Approx(std::sqrt(30.0 / 8.0)).epsilon(1e-15));
}

TEST_CASE("generators satisfy su(1,1) relations away from the cut") {
  const int dim = 10;
  const Generators g = build_generators(dim);
  const Eigen::Index b = dim - 1;
  auto block = [&](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(m.topLeftCorner(b, b)); };
  CHECK(max_abs(block(commutator(g.sminus.entries, g.splus.entries) - g.s0.entries)) < 1e-13);
  CHECK(max_abs(block(commutator(g.s0.entries, g.splus.entries) - g.splus.entries)) < 1e-13);
  CHECK(max_abs(block(commutator(g.sminus.entries, g.s0.entries) - g.sminus.entries)) < 1e-13);
}

TEST_CASE("Hamiltonian is S0 + gamma (S+ - S-)") {
  const ModelParams p = make_params(0.6);
  const TruncatedOperator h = build_hamiltonian(p, 2);
  CHECK(h.entries(1, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(h.entries(0, 1) == doctest::Approx(-0.3).epsilon(1e-15));
  const TruncatedOperator h0 = build_hamiltonian(make_params(0.0), 5);
  CHECK(max_abs(h0.entries - build_generators(5).s0.entries) == 0.0);
  CHECK_THROWS_AS(build_hamiltonian(p, 1), DomainError);
}

TEST_CASE("T0 equals H / lambda_scale") {
  const ModelParams p = make_params(0.6);
  const LadderOperators t = build_t_operators(p, 30);
  const TruncatedOperator h = build_hamiltonian(p, 30);
  CHECK(max_abs(t.t0.entries - h.entries / p.lambda_scale) < 1e-15);
  const LadderOperators t0 = build_t_operators(make_params(0.0), 6);
  const Generators g = build_generators(6);
  CHECK(max_abs(t0.tplus.entries - g.splus.entries) == 0.0);
  CHECK(max_abs(t0.tminus.entries - g.sminus.entries) == 0.0);
}

TEST_CASE("T operators raise and lower the ladder of H") {
  const ModelParams p = make_params(0.6);
  const int dim = 60;
  const Eigen::MatrixXd h = build_hamiltonian(p, dim).entries;
  const LadderOperators t = build_t_operators(p, dim);
  // [H, T+] = L T+ holds away from the truncation edge
  const Eigen::MatrixXd r = commutator(h, t.tplus.entries) - p.lambda_scale * t.tplus.entries;
  CHECK(max_abs(r.topLeftCorner(dim - 2, dim - 2)) < 1e-12);
}

TEST_CASE("ground vectors follow the closed form") {
  const ModelParams p = make_params(0.6);
  const GroundVectors gv = ground_vectors(p, 12);
  CHECK(gv.right(1) == doctest::Approx(-0.2595734).epsilon(1e-6));
  CHECK(gv.right(2) == doctest::Approx(0.0825211).epsilon(1e-6));
  double c = 1.0;
  for (int k = 0; k < 12; ++k) {
    if (k > 0) c *= std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    const double mag = c * std::pow(p.eta, k);
    CHECK(gv.left(k) == doctest::Approx(mag).epsilon(1e-14));
    CHECK(gv.right(k) == doctest::Approx((k % 2 ? -1.0 : 1.0) * mag).epsilon(1e-14));
  }
  const GroundVectors g0 = ground_vectors(make_params(0.0), 5);
  CHECK(g0.right == Eigen::VectorXd::Unit(5, 0));
  CHECK(g0.left == Eigen::VectorXd::Unit(5, 0));
}

TEST_CASE("ground vectors are eigenvectors of the truncation") {
  const ModelParams p = make_params(0.6);
  const int dim = 60;
  const Eigen::MatrixXd h = build_hamiltonian(p, dim).entries;
  const GroundVectors gv = ground_vectors(p, dim);
  const double l1 = mode_energy(p, 1);
  CHECK((h * gv.right - l1 * gv.right).norm() / gv.right.norm() <= 1e-12);
  CHECK((h.transpose() * gv.left - l1 * gv.left).norm() / gv.left.norm() <= 1e-12);
}

TEST_CASE("biorthogonal ladder") {
  SUBCASE("gamma = 0 gives the standard basis") {
    const BiorthogonalSystem s = build_biorthogonal(make_params(0.0), 8, 3, 1e-12);
    CHECK(max_abs(s.right - Eigen::MatrixXd::Identity(8, 3)) < 1e-15);
    CHECK(max_abs(s.left - Eigen::MatrixXd::Identity(8, 3)) < 1e-15);
    CHECK(s.eigenvalues[0] == 0.25);
    CHECK(s.eigenvalues[2] == 2.25);
  }
  SUBCASE("gamma = 3/5 against the dense solver") {
    const ModelParams p = make_params(0.6);
    const BiorthogonalSystem s = build_biorthogonal(p, 60, 5, 1e-8);
    const std::vector<double> dense =
        dense_spectrum(build_hamiltonian(p, 60), 5, SpectrumMethod::Dense);
    for (int k = 0; k < 5; ++k) {
      CHECK(std::abs(s.eigenvalues[k] - dense[k]) / dense[k] <= 1e-10);
    }
    CHECK(std::abs(s.left.col(1).dot(s.right.col(2))) <= 1e-10);
    CHECK(s.gram_defect <= 1e-8);
  }
  SUBCASE("too many pairs for the truncation") {
    CHECK_THROWS_AS(build_biorthogonal(make_params(0.6), 10, 6, 1e-8), DomainError);
  }
  SUBCASE("a short truncation misses a tight tolerance") {
    CHECK_THROWS_AS(build_biorthogonal(make_params(1.5), 12, 6, 1e-12), TruncationError);
  }
}

TEST_CASE("dense spectrum") {
  const std::vector<double> d = dense_spectrum(build_hamiltonian(make_params(0.0), 10), 4);
  CHECK(d == std::vector<double>{0.25, 1.25, 2.25, 3.25});

  const ModelParams p = make_params(0.6);
  const std::vector<double> ev = dense_spectrum(p, 100, 10);
  CHECK(std::abs(ev[0] - p.lambda_scale / 4.0) <= 1e-10);
  for (int k = 1; k < 10; ++k) {
    CHECK(std::abs(ev[k] - ev[k - 1] - p.lambda_scale) <= 1e-8);
  }
  const std::vector<double> small = dense_spectrum(build_hamiltonian(p, 40), 1);
  CHECK(small[0] == doctest::Approx(0.3278719).epsilon(1e-7));
}

TEST_CASE("quad refinement beats plain QR on ill-conditioned levels") {
  const ModelParams p = make_params(1.5);
  const std::vector<double> refined = dense_spectrum(p, 100, 8);
  for (int k = 1; k <= 8; ++k) {
    CHECK(std::abs(refined[k - 1] - mode_energy(p, k)) / mode_energy(p, k) <= 1e-12);
  }
}

TEST_CASE("truncation eigensystem is biorthonormal") {
  const TruncationEigensystem es = truncation_eigensystem(build_hamiltonian(make_params(0.6), 6));
  CHECK(es.eigenvalues.size() == 6);
  CHECK(es.eigenvalues(0).real() == doctest::Approx(0.327883).epsilon(1e-5));
  CHECK(std::abs(es.eigenvalues(0).imag()) < 1e-12);
  const Eigen::MatrixXcd gram = es.left.transpose() * es.right;
  CHECK((gram - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(es.gram_defect < 1e-12);
}

TEST_CASE("dense spectrum rejects bad requests") {
  const TruncatedOperator h = build_hamiltonian(make_params(0.6), 6);
  CHECK_THROWS_AS(dense_spectrum(h, 0), DomainError);
  CHECK_THROWS_AS(dense_spectrum(h, 7), DomainError);
  // the upper levels of a 6 x 6 truncation are complex pairs
  CHECK_THROWS_AS(dense_spectrum(h, 4), NumericalError);
}
