// Quad-precision polishing of eigenvalues of real tridiagonal matrices.
//
// Truncations of H are strongly non-normal: left and right eigenvectors of the
// higher levels are almost orthogonal, so a backward-stable dense solver in
// double loses up to eight digits on them. The eigenvalues of the truncation
// itself are perfectly well defined; carrying the two-sided Rayleigh quotient
// iteration in 113-bit arithmetic recovers them to full double accuracy.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/multiprecision/float128.hpp>

#include "nhfermion/errors.hpp"
#include "nhfermion/operator_algebra.hpp"

namespace nhf::detail {

namespace {

using Quad = boost::multiprecision::float128;
using QuadVec = std::vector<Quad>;

/// LU factorization with partial pivoting of a tridiagonal matrix, following
/// the row-interchange scheme of LAPACK's gttrf/gtts2.
class TridiagonalLU {
 public:
  TridiagonalLU(QuadVec lower, QuadVec diag, QuadVec upper)
      : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
    const std::size_t n = d_.size();
    du2_.assign(n > 2 ? n - 2 : 0, Quad(0));
    swapped_.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (abs(d_[i]) >= abs(dl_[i])) {
        if (d_[i] == 0) d_[i] = tiny();
        const Quad fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const Quad fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const Quad temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    if (n > 0 && d_[n - 1] == 0) d_[n - 1] = tiny();
  }

  void solve(QuadVec& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const Quad temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Quad acc = b[ii];
      if (ii + 1 < n) acc -= du_[ii] * b[ii + 1];
      if (ii + 2 < n) acc -= du2_[ii] * b[ii + 2];
      b[ii] = acc / d_[ii];
    }
  }

 private:
  static Quad tiny() { return Quad(1e-300); }

  QuadVec dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
};

Quad norm(const QuadVec& v) {
  Quad s = 0;
  for (const Quad& x : v) s += x * x;
  return sqrt(s);
}

void normalize(QuadVec& v) {
  const Quad n = norm(v);
  for (Quad& x : v) x /= n;
}

Quad dot(const QuadVec& a, const QuadVec& b) {
  Quad s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace {

double rayleigh_refine(const QuadVec& a, const QuadVec& lo, const QuadVec& up, double shift) {
  const std::size_t n = a.size();
  if (n == 1) return static_cast<double>(a[0]);

  auto apply = [&](const QuadVec& x) {
    QuadVec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Quad s = a[i] * x[i];
      if (i > 0) s += lo[i - 1] * x[i - 1];
      if (i + 1 < n) s += up[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  };
  auto shifted = [&](Quad sigma) {
    QuadVec out(a);
    for (Quad& x : out) x -= sigma;
    return out;
  };

  QuadVec x(n, Quad(1)), y(n, Quad(1));
  normalize(x);
  normalize(y);
  Quad sigma = shift;
  Quad step = 0;
  Quad resid = 0;
  constexpr int kMaxIter = 40;
  constexpr int kLockIter = 2;  // plain inverse iteration before updating the shift
  const Quad scale = 1 + abs(Quad(shift));

  for (int it = 0; it < kMaxIter; ++it) {
    TridiagonalLU right(lo, shifted(sigma), up);
    TridiagonalLU left(up, shifted(sigma), lo);
    right.solve(x);
    normalize(x);
    left.solve(y);
    normalize(y);

    const Quad pairing = dot(y, x);
    if (pairing == 0) break;
    const QuadVec ax = apply(x);
    const Quad next = dot(y, ax) / pairing;
    QuadVec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - next * x[i];
    resid = norm(r);
    step = abs(next - sigma);
    if (it >= kLockIter) sigma = next;
    if (it >= kLockIter && step <= Quad(1e-24) * scale) {
      const double refined = static_cast<double>(sigma);
      if (std::abs(refined - shift) > 1e-3 * static_cast<double>(scale)) {
        std::ostringstream msg;
        msg << "dense_spectrum: refinement drifted from " << shift << " to " << refined;
        throw NumericalError(msg.str());
      }
      return refined;
    }
  }
  std::ostringstream msg;
  msg << "dense_spectrum: Rayleigh quotient iteration did not converge near " << shift
      << " after " << kMaxIter << " iterations (last step " << static_cast<double>(step)
      << ", residual " << static_cast<double>(resid)
      << "); the eigenvalue is probably part of a complex pair";
  throw NumericalError(msg.str());
}

}  // namespace

double refine_tridiagonal_eigenvalue(const Eigen::VectorXd& diag, const Eigen::VectorXd& lower,
                                     const Eigen::VectorXd& upper, double shift) {
  const std::size_t n = static_cast<std::size_t>(diag.size());
  if (n == 0 || static_cast<std::size_t>(lower.size()) + 1 != n ||
      static_cast<std::size_t>(upper.size()) + 1 != n) {
    throw DomainError("refine_tridiagonal_eigenvalue: inconsistent band lengths");
  }
  QuadVec a(n), lo(n - 1), up(n - 1);
  for (std::size_t i = 0; i < n; ++i) a[i] = diag(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    lo[i] = lower(static_cast<Eigen::Index>(i));
    up[i] = upper(static_cast<Eigen::Index>(i));
  }
  return rayleigh_refine(a, lo, up, shift);
}

double refine_model_eigenvalue(double gamma, int dim, double shift) {
  if (dim < 1) {
    throw DomainError("refine_model_eigenvalue: dimension must be >= 1");
  }
  const std::size_t n = static_cast<std::size_t>(dim);
  QuadVec a(n), lo(n - 1), up(n - 1);
  const Quad g = gamma;
  const Quad denom = 2 * sqrt(Quad(2));
  for (std::size_t i = 0; i < n; ++i) a[i] = Quad(4 * static_cast<int>(i) + 1) / 4;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Quad k = static_cast<int>(i) + 1;
    const Quad w = g * sqrt((2 * k - 1) * 2 * k) / denom;
    lo[i] = w;
    up[i] = -w;
  }
  return rayleigh_refine(a, lo, up, shift);
}

}  // namespace nhf::detail
