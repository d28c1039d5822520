#include "nhfermion/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/float128.hpp>

#include "nhfermion/errors.hpp"

namespace nhf {

namespace {

using Quad = boost::multiprecision::float128;

int squarings_for(double norm1, double target) {
  if (!(norm1 > target)) return 0;
  return static_cast<int>(std::ceil(std::log2(norm1 / target)));
}

/// diag((-1)^k): flips the sign of every off-diagonal entry of a tridiagonal
/// matrix with zero diagonal, so exp(-t X) = J exp(t X) J.
Eigen::MatrixXd checkerboard(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if ((i + j) % 2 == 1) out(i, j) = -out(i, j);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& a, double t) {
  if (a.rows() != a.cols()) {
    throw DomainError("sym_exp: matrix must be square");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("sym_exp: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_exp: symmetric eigensolver failed");
  }
  const Eigen::VectorXd mapped = (t * solver.eigenvalues()).array().exp();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  return v * mapped.asDiagonal() * v.transpose();
}

Eigen::MatrixXd exp_nonnegative(const Eigen::MatrixXd& a, double t) {
  if (a.rows() != a.cols()) {
    throw DomainError("exp_nonnegative: matrix must be square");
  }
  if (t < 0.0 || (a.array() < 0.0).any()) {
    throw DomainError("exp_nonnegative: requires t >= 0 and nonnegative entries");
  }
  const Eigen::Index n = a.rows();
  const double norm1 = t * a.cwiseAbs().colwise().sum().maxCoeff();
  const int s = squarings_for(norm1, 0.5);
  const Eigen::MatrixXd b = a * (t / std::ldexp(1.0, s));

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  // ||b||_1 <= 1/2: 30 terms put the remainder far below double rounding
  for (int k = 1; k <= 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
    if (term.maxCoeff() <= 1e-20 * sum.maxCoeff()) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

Eigen::MatrixXd exp_pade(const Eigen::MatrixXd& a, double t) {
  if (a.rows() != a.cols()) {
    throw DomainError("exp_pade: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  const double norm1 = std::abs(t) * a.cwiseAbs().colwise().sum().maxCoeff();
  const int s = squarings_for(norm1, 0.5);
  const Eigen::MatrixXd x = a * (t / std::ldexp(1.0, s));

  // [6/6] diagonal Pade coefficients c_k = (12 - k)! 6! / (12! k! (6 - k)!)
  constexpr int q = 6;
  double c = 0.5;
  Eigen::MatrixXd xk = x;
  Eigen::MatrixXd num = Eigen::MatrixXd::Identity(n, n) + c * x;
  Eigen::MatrixXd den = Eigen::MatrixXd::Identity(n, n) - c * x;
  double sign = 1.0;
  for (int k = 2; k <= q; ++k) {
    c = c * (q - k + 1) / (k * (2 * q - k + 1));
    xk = x * xk;
    num += c * xk;
    den += sign * c * xk;
    sign = -sign;
  }
  Eigen::MatrixXd e = den.partialPivLu().solve(num);
  for (int i = 0; i < s; ++i) e = e * e;
  return e;
}

MetricOperator build_metric(const ModelParams& params, int dim) {
  // Exponentiate a 2 dim truncation and keep the leading block, so the kept
  // entries approximate the semi-infinite metric instead of carrying the
  // edge error of the dim x dim exponential.
  const Generators g = build_generators(2 * dim);
  const Eigen::MatrixXd x = g.splus.entries + g.sminus.entries;

  MetricOperator m;
  m.dim = dim;
  m.alpha = params.alpha;
  const double a = std::abs(params.alpha);
  m.d2 = exp_nonnegative(x, 2.0 * a).topLeftCorner(dim, dim);
  m.d = exp_nonnegative(x, a).topLeftCorner(dim, dim);
  if (params.alpha < 0.0) {
    m.d2 = checkerboard(m.d2);
    m.d = checkerboard(m.d);
  }
  if (!m.d2.allFinite() || !m.d.allFinite()) {
    throw NumericalError("build_metric: metric entries overflowed at truncation order " +
                         std::to_string(dim));
  }
  if ((m.d2.diagonal().array() <= 0.0).any()) {
    throw NumericalError("build_metric: metric lost positivity on its diagonal");
  }
  return m;
}

TruncatedOperator conjugate_generator(const ModelParams& params, int dim, Generator which) {
  TruncatedOperator out;
  switch (which) {
    case Generator::S0: out.label = OperatorLabel::T0; break;
    case Generator::Splus: out.label = OperatorLabel::Tplus; break;
    case Generator::Sminus: out.label = OperatorLabel::Tminus; break;
  }
  if (params.alpha == 0.0) {
    const Generators g = build_generators(dim);
    out.entries = which == Generator::S0      ? g.s0.entries
                  : which == Generator::Splus ? g.splus.entries
                                              : g.sminus.entries;
    return out;
  }

  // Summed on a 2 dim truncation so that boundary error, which enters from
  // the edge one row per term, never reaches the kept block. Rounding noise
  // off the tridiagonal band is amplified by ad_X roughly like
  // exp(2 sqrt2 |alpha| k) at row k, hence quad precision.
  const int n = 2 * dim;
  const std::size_t un = static_cast<std::size_t>(n);
  const Quad root2 = sqrt(Quad(2));
  std::vector<Quad> w(un - 1);
  for (int k = 1; k < n; ++k) {
    w[static_cast<std::size_t>(k - 1)] = sqrt(Quad((2 * k - 1) * 2 * k)) / (2 * root2);
  }
  const Quad g = params.gamma;
  const Quad alpha = atan(root2 * g) / root2;

  std::vector<Quad> term(un * un, Quad(0));
  auto at = [un](std::vector<Quad>& v, int i, int j) -> Quad& {
    return v[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * un];
  };
  for (int k = 0; k < n; ++k) {
    switch (which) {
      case Generator::S0: at(term, k, k) = Quad(4 * k + 1) / 4; break;
      case Generator::Splus:
        if (k + 1 < n) at(term, k + 1, k) = w[static_cast<std::size_t>(k)];
        break;
      case Generator::Sminus:
        if (k + 1 < n) at(term, k, k + 1) = w[static_cast<std::size_t>(k)];
        break;
    }
  }
  std::vector<Quad> sum = term;
  std::vector<Quad> next(un * un);

  // term_n = alpha^n / n! ad_X^n(G), ad_X(Y) = YX - XY, X tridiagonal with
  // zero diagonal and off-diagonal w
  constexpr int kMaxTerms = 4000;
  int iter = 1;
  for (; iter <= kMaxTerms; ++iter) {
    std::fill(next.begin(), next.end(), Quad(0));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Quad y = at(term, i, j);
        if (y == 0) continue;
        if (j + 1 < n) at(next, i, j + 1) += y * w[static_cast<std::size_t>(j)];
        if (j > 0) at(next, i, j - 1) += y * w[static_cast<std::size_t>(j - 1)];
        if (i + 1 < n) at(next, i + 1, j) -= w[static_cast<std::size_t>(i)] * y;
        if (i > 0) at(next, i - 1, j) -= w[static_cast<std::size_t>(i - 1)] * y;
      }
    }
    const Quad factor = alpha / iter;
    Quad kept = 0;
    Quad scale = 1;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        Quad& v = at(next, i, j);
        v *= factor;
        Quad& s = at(sum, i, j);
        s += v;
        if (i < dim && j < dim) {
          kept = std::max(kept, abs(v));
          scale = std::max(scale, abs(s));
        }
      }
    }
    if (!isfinite(kept)) {
      throw NumericalError("conjugate_generator: commutator series overflowed");
    }
    term.swap(next);
    if (iter > 4 && kept <= Quad(1e-30) * scale) break;
  }
  if (iter > kMaxTerms) {
    throw NumericalError("conjugate_generator: commutator series did not converge");
  }
  out.entries.resize(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) out.entries(i, j) = static_cast<double>(at(sum, i, j));
  }
  return out;
}

double physical_inner(const MetricOperator& metric, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& v) {
  if (u.size() != metric.d2.rows() || v.size() != metric.d2.rows()) {
    throw DomainError("physical_inner: vector length does not match the metric dimension");
  }
  return (metric.d2 * u).dot(v);
}

Eigen::Index metric_interior(int dim) { return (dim + 1) / 2; }

double relative_block_residual(const Eigen::MatrixXd& residual, const Eigen::MatrixXd& scale,
                               Eigen::Index block) {
  const double denom = leading_block_max_abs(scale, block);
  const double num = leading_block_max_abs(residual, block);
  return denom > 0.0 ? num / denom : num;
}

double hermitization_residual(const MetricOperator& metric, const TruncatedOperator& h) {
  const Eigen::MatrixXd r = metric.d2 * h.entries - h.entries.transpose() * metric.d2;
  return relative_block_residual(r, metric.d2, metric_interior(metric.dim));
}

}  // namespace nhf
