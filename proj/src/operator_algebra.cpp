#include "nhfermion/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "nhfermion/errors.hpp"

namespace nhf {

std::string_view to_string(OperatorLabel label) {
  switch (label) {
    case OperatorLabel::S0: return "S0";
    case OperatorLabel::Splus: return "Splus";
    case OperatorLabel::Sminus: return "Sminus";
    case OperatorLabel::H: return "H";
    case OperatorLabel::T0: return "T0";
    case OperatorLabel::Tplus: return "Tplus";
    case OperatorLabel::Tminus: return "Tminus";
    case OperatorLabel::D2: return "D2";
    case OperatorLabel::Other: return "other";
  }
  return "other";
}

double ladder_weight(int k) {
  return std::sqrt((2.0 * k - 1.0) * 2.0 * k) / (2.0 * std::numbers::sqrt2);
}

Generators build_generators(int dim) {
  if (dim < 2) {
    throw DomainError("build_generators: truncation order must be >= 2, got " + std::to_string(dim));
  }
  Generators g;
  g.s0.label = OperatorLabel::S0;
  g.s0.entries = Eigen::MatrixXd::Zero(dim, dim);
  g.splus.label = OperatorLabel::Splus;
  g.splus.entries = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 1; k <= dim; ++k) {
    g.s0.entries(k - 1, k - 1) = (4.0 * k - 3.0) / 4.0;
  }
  for (int k = 1; k < dim; ++k) {
    g.splus.entries(k, k - 1) = ladder_weight(k);
  }
  g.sminus.label = OperatorLabel::Sminus;
  g.sminus.entries = g.splus.entries.transpose();
  return g;
}

TruncatedOperator build_hamiltonian(const ModelParams& params, int dim) {
  const Generators g = build_generators(dim);
  TruncatedOperator h;
  h.label = OperatorLabel::H;
  h.entries = g.s0.entries + params.gamma * (g.splus.entries - g.sminus.entries);
  return h;
}

LadderOperators build_t_operators(const ModelParams& params, int dim) {
  const Generators g = build_generators(dim);
  const double lam = params.lambda_scale;
  const double gam = params.gamma;
  const Eigen::MatrixXd& s0 = g.s0.entries;
  const Eigen::MatrixXd& sp = g.splus.entries;
  const Eigen::MatrixXd& sm = g.sminus.entries;

  const double up = (1.0 + lam) / (2.0 * lam);
  const double down = (1.0 - lam) / (2.0 * lam);

  LadderOperators t;
  t.t0.label = OperatorLabel::T0;
  t.t0.entries = (s0 + gam * (sp - sm)) / lam;
  t.tminus.label = OperatorLabel::Tminus;
  t.tminus.entries = (gam / lam) * s0 - down * sp + up * sm;
  t.tplus.label = OperatorLabel::Tplus;
  t.tplus.entries = -(gam / lam) * s0 + up * sp - down * sm;
  return t;
}

GroundVectors ground_vectors(const ModelParams& params, int dim) {
  if (dim < 1) {
    throw DomainError("ground_vectors: dimension must be >= 1");
  }
  GroundVectors v;
  v.right.resize(dim);
  v.left.resize(dim);
  v.right(0) = 1.0;
  v.left(0) = 1.0;
  for (int k = 1; k < dim; ++k) {
    // ratio sqrt((2k - 1) / 2k) builds the double-factorial quotient
    const double step = params.eta * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    v.right(k) = -step * v.right(k - 1);
    v.left(k) = step * v.left(k - 1);
  }
  return v;
}

BiorthogonalSystem build_biorthogonal(const ModelParams& params, int dim, int count, double tol) {
  if (count < 1 || 2 * count > dim) {
    throw DomainError("build_biorthogonal: need 1 <= count <= dim / 2 (count=" +
                      std::to_string(count) + ", dim=" + std::to_string(dim) + ")");
  }
  const TruncatedOperator h = build_hamiltonian(params, dim);
  const LadderOperators t = build_t_operators(params, dim);
  const GroundVectors seed = ground_vectors(params, dim);
  const Eigen::MatrixXd raise = t.tplus.entries;
  const Eigen::MatrixXd lower_t = t.tminus.entries.transpose();

  BiorthogonalSystem sys;
  sys.dim = dim;
  sys.count = count;
  sys.right.resize(dim, count);
  sys.left.resize(dim, count);

  Eigen::VectorXd r = seed.right;
  Eigen::VectorXd l = seed.left;
  for (int j = 0; j < count; ++j) {
    if (j > 0) {
      r = raise * sys.right.col(j - 1);
      l = lower_t * sys.left.col(j - 1);
    }
    r /= r.norm();
    const double overlap = l.dot(r);
    if (overlap == 0.0 || !std::isfinite(overlap)) {
      throw TruncationError("build_biorthogonal: vanishing pairing <left, right> at level " +
                                std::to_string(j + 1),
                            std::numeric_limits<double>::infinity());
    }
    l /= overlap;
    sys.right.col(j) = r;
    sys.left.col(j) = l;
  }

  const Eigen::MatrixXd& hm = h.entries;
  sys.eigenvalues.resize(count);
  double residual = 0.0;
  for (int j = 0; j < count; ++j) {
    const auto rj = sys.right.col(j);
    const auto lj = sys.left.col(j);
    const double lambda = lj.dot(hm * rj);
    sys.eigenvalues[j] = lambda;
    residual = std::max(residual, (hm * rj - lambda * rj).norm() / rj.norm());
    residual = std::max(residual, (hm.transpose() * lj - lambda * lj).norm() / lj.norm());
  }
  sys.residual = residual;
  sys.gram_defect =
      (sys.left.transpose() * sys.right - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff();

  if (!(residual <= tol)) {
    throw TruncationError("build_biorthogonal: eigen-residual " + std::to_string(residual) +
                              " exceeds tolerance; increase the truncation order",
                          residual);
  }
  if (!(sys.gram_defect <= tol)) {
    throw TruncationError("build_biorthogonal: biorthogonality defect " +
                              std::to_string(sys.gram_defect) + " exceeds tolerance",
                          sys.gram_defect);
  }
  return sys;
}

namespace {

void require_tridiagonal(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) {
    throw DomainError("dense_spectrum: operator must be square");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) {
        throw DomainError("dense_spectrum: operator is not tridiagonal");
      }
    }
  }
}

bool less_re_im(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::vector<double> dense_spectrum(const TruncatedOperator& h, int count, SpectrumMethod method) {
  const Eigen::MatrixXd& m = h.entries;
  require_tridiagonal(m);
  const Eigen::Index n = m.rows();
  if (count < 1 || count > n) {
    throw DomainError("dense_spectrum: requested count out of range");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense_spectrum: nonsymmetric QR iteration did not converge");
  }
  std::vector<std::complex<double>> ev(solver.eigenvalues().data(),
                                       solver.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end(), less_re_im);

  std::vector<double> out;
  out.reserve(count);
  if (method == SpectrumMethod::Dense) {
    for (int j = 0; j < count; ++j) out.push_back(ev[j].real());
    return out;
  }

  const Eigen::VectorXd diag = m.diagonal();
  const Eigen::VectorXd lower = m.diagonal(-1);
  const Eigen::VectorXd upper = m.diagonal(1);
  // A complex pair straddling the cut would show up twice with the same real
  // part; refinement in real arithmetic then fails to converge and throws.
  for (int j = 0; j < count; ++j) {
    out.push_back(detail::refine_tridiagonal_eigenvalue(diag, lower, upper, ev[j].real()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> dense_spectrum(const ModelParams& params, int dim, int count,
                                   SpectrumMethod method) {
  const TruncatedOperator h = build_hamiltonian(params, dim);
  std::vector<double> rough = dense_spectrum(h, count, SpectrumMethod::Dense);
  if (method == SpectrumMethod::Dense) return rough;
  for (double& v : rough) v = detail::refine_model_eigenvalue(params.gamma, dim, v);
  std::sort(rough.begin(), rough.end());
  return rough;
}

TruncationEigensystem truncation_eigensystem(const TruncatedOperator& h) {
  const Eigen::MatrixXd& m = h.entries;
  const Eigen::Index n = m.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("truncation_eigensystem: nonsymmetric QR iteration did not converge");
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::VectorXcd vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return less_re_im(vals(a), vals(b)); });

  TruncationEigensystem sys;
  sys.eigenvalues.resize(n);
  sys.right.resize(n, n);
  const Eigen::MatrixXcd vecs = solver.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    sys.eigenvalues(j) = vals(order[j]);
    Eigen::VectorXcd v = vecs.col(order[j]);
    // Fix the phase so that the largest component is real and positive.
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::abs(v(big)) / v(big);
    sys.right.col(j) = v / v.norm();
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys.right);
  if (!lu.isInvertible()) {
    throw NumericalError("truncation_eigensystem: eigenvector matrix is singular (defective operator)");
  }
  sys.left = lu.inverse().transpose();
  sys.gram_defect = (sys.left.transpose() * sys.right - Eigen::MatrixXcd::Identity(n, n))
                        .cwiseAbs()
                        .maxCoeff();
  return sys;
}

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

double leading_block_max_abs(const Eigen::MatrixXd& m, Eigen::Index block) {
  block = std::min({block, m.rows(), m.cols()});
  if (block <= 0) return 0.0;
  return m.topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

}  // namespace nhf
