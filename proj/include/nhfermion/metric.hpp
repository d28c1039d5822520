#pragma once

#include <Eigen/Dense>

#include "nhfermion/core_model.hpp"
#include "nhfermion/operator_algebra.hpp"

namespace nhf {

/// Metric D^2 = exp(2 alpha (S+ + S-)) on a truncation, with its principal
/// square root D = exp(alpha (S+ + S-)).
///
/// Both are the leading dim x dim blocks of exponentials taken on a 2 dim
/// truncation, i.e. approximations to the blocks of the semi-infinite
/// operators. Hence d * d == d2 holds to round-off only on about the leading
/// dim / 3 block; on the full interior block it degrades to ~1e-6.
///
/// Entries grow roughly geometrically along the diagonal (the (30, 30) entry
/// is ~1e18 for gamma = 3/5), so identities involving the metric are only
/// meaningful relative to the block's scale; see metric_interior() and
/// relative_block_residual().
struct MetricOperator {
  int dim = 0;
  double alpha = 0.0;
  Eigen::MatrixXd d2;
  Eigen::MatrixXd d;
};

/// exp(t A) for symmetric A by spectral mapping through a symmetric
/// eigendecomposition. Accurate in the normwise sense only: entries much
/// smaller than the largest one inherit its absolute error. Throws
/// DomainError if A is not symmetric.
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& a, double t);

/// exp(t A) for a matrix with nonnegative entries and t >= 0, by Taylor
/// polynomial plus repeated squaring. No subtraction ever occurs, so every
/// entry carries a small relative error regardless of its size.
Eigen::MatrixXd exp_nonnegative(const Eigen::MatrixXd& a, double t);

/// Reference scaling-and-squaring exponential with a [6/6] Pade approximant.
/// Used as an independent cross-check of sym_exp.
Eigen::MatrixXd exp_pade(const Eigen::MatrixXd& a, double t);

MetricOperator build_metric(const ModelParams& params, int dim);

enum class Generator { S0, Splus, Sminus };

/// exp(-alpha X) G exp(alpha X) with X = S+ + S-, summed as the nested
/// commutator series G + alpha [G, X] + alpha^2 / 2 [[G, X], X] + ... which
/// never forms the (badly scaled) exponentials themselves. Evaluated in quad
/// precision; costs about a second for dim = 60.
TruncatedOperator conjugate_generator(const ModelParams& params, int dim, Generator which);

/// <D^2 u, v>. Throws DomainError on dimension mismatch.
double physical_inner(const MetricOperator& metric, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& v);

/// Side of the leading block on which metric identities are checked:
/// ceil(dim / 2).
Eigen::Index metric_interior(int dim);

/// max |residual(i, j)| / max |scale(i, j)| over the leading block.
double relative_block_residual(const Eigen::MatrixXd& residual, const Eigen::MatrixXd& scale,
                               Eigen::Index block);

/// D^2 H - H^T D^2, relative to D^2, on the interior block.
double hermitization_residual(const MetricOperator& metric, const TruncatedOperator& h);

}  // namespace nhf
