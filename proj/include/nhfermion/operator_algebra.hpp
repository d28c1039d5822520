#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nhfermion/core_model.hpp"

namespace nhf {

enum class OperatorLabel { S0, Splus, Sminus, H, T0, Tplus, Tminus, D2, Other };

std::string_view to_string(OperatorLabel label);

/// Leading M x M block of one of the semi-infinite operators of the model.
/// Rows and columns are 0-based here; level k of the model is index k - 1.
struct TruncatedOperator {
  OperatorLabel label = OperatorLabel::Other;
  Eigen::MatrixXd entries;

  Eigen::Index dim() const { return entries.rows(); }
};

struct Generators {
  TruncatedOperator s0;
  TruncatedOperator splus;
  TruncatedOperator sminus;
};

struct LadderOperators {
  TruncatedOperator t0;
  TruncatedOperator tplus;
  TruncatedOperator tminus;
};

/// Sub-diagonal weight sqrt((2k - 1) 2k) / (2 sqrt 2) linking level k to k + 1.
double ladder_weight(int k);

/// S0, S+ and S- truncated to dim x dim. Throws DomainError for dim < 2.
Generators build_generators(int dim);

/// H = S0 + gamma (S+ - S-), real tridiagonal.
TruncatedOperator build_hamiltonian(const ModelParams& params, int dim);

/// The su(1,1) ladder triple built from the eigenvectors of the 3 x 3
/// equation-of-motion problem. For gamma = 0 this returns the generators.
LadderOperators build_t_operators(const ModelParams& params, int dim);

/// Closed-form seeds: right eigenvector of H and eigenvector of H^T for the
/// lowest level lambda_scale / 4. Both start with component 1.
struct GroundVectors {
  Eigen::VectorXd right;
  Eigen::VectorXd left;
};

GroundVectors ground_vectors(const ModelParams& params, int dim);

/// Paired right/left eigenvectors stored as columns, normalized so that
/// left.col(j).dot(right.col(j)) == 1 and every right column has unit norm.
struct BiorthogonalSystem {
  int dim = 0;
  int count = 0;
  std::vector<double> eigenvalues;
  Eigen::MatrixXd right;
  Eigen::MatrixXd left;
  /// Largest relative eigen-residual over both families.
  double residual = 0.0;
  /// max |left^T right - I|.
  double gram_defect = 0.0;
};

/// Ladder construction: right vectors are T+^{j-1} applied to the right seed,
/// left vectors (T-^T)^{j-1} applied to the left seed. Requires
/// 1 <= count <= dim / 2; throws TruncationError when the residual or the
/// Gram defect exceeds tol.
BiorthogonalSystem build_biorthogonal(const ModelParams& params, int dim, int count, double tol);

enum class SpectrumMethod {
  /// Dense nonsymmetric QR followed by two-sided Rayleigh quotient iteration
  /// in quad precision on the tridiagonal structure.
  Refined,
  /// Dense nonsymmetric QR only.
  Dense,
};

/// The `count` smallest eigenvalues (by real part) of a real tridiagonal
/// truncation, ascending. Throws NumericalError if one of the requested
/// eigenvalues is not real or the refinement does not converge.
std::vector<double> dense_spectrum(const TruncatedOperator& h, int count,
                                   SpectrumMethod method = SpectrumMethod::Refined);

/// Same for the model Hamiltonian truncated to dim x dim. The refinement
/// rebuilds the matrix entries in quad precision: for gamma ~ 1 the upper
/// levels are so ill-conditioned that rounding the entries to double alone
/// moves them by ~1e-8.
std::vector<double> dense_spectrum(const ModelParams& params, int dim, int count,
                                   SpectrumMethod method = SpectrumMethod::Refined);

/// Complete eigensystem of a finite real matrix. Finite truncations of H are
/// non-normal and may carry complex-conjugate pairs at the top of the
/// spectrum, hence complex storage. Columns sorted by (real, imag) part;
/// left.transpose() * right == I and right columns have unit norm.
struct TruncationEigensystem {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  double gram_defect = 0.0;
};

TruncationEigensystem truncation_eigensystem(const TruncatedOperator& h);

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// max |m(i, j)| over the leading block x block corner.
double leading_block_max_abs(const Eigen::MatrixXd& m, Eigen::Index block);

namespace detail {

/// Two-sided Rayleigh quotient iteration on a real tridiagonal matrix with
/// diagonal `diag`, sub-diagonal `lower` and super-diagonal `upper`. Returns
/// the refined eigenvalue nearest to `shift`.
double refine_tridiagonal_eigenvalue(const Eigen::VectorXd& diag, const Eigen::VectorXd& lower,
                                     const Eigen::VectorXd& upper, double shift);

/// As above for the model Hamiltonian, with entries evaluated in quad
/// precision from gamma.
double refine_model_eigenvalue(double gamma, int dim, double shift);

}  // namespace detail

}  // namespace nhf
