#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "nhfermion/core_model.hpp"
#include "nhfermion/operator_algebra.hpp"

namespace nhf {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;

/// Fermionic Fock space over `modes` single-particle modes, optionally cut
/// to the sectors with at most `max_particles` particles.
///
/// Basis states are occupation bitmasks (bit j <-> mode j + 1), ordered by
/// particle number and then by mask value, so sector blocks are contiguous
/// and the one-particle sector lists the modes in order. A basis mask with
/// bits j1 < j2 < ... stands for c+_{j1} c+_{j2} ... |vac>, i.e. the wedge
/// e_{j1} ^ e_{j2} ^ ... in ascending order.
class FockSpace {
 public:
  static constexpr int kMaxCompleteModes = 14;
  static constexpr Eigen::Index kMaxDimension = 16384;

  /// Complete space, dimension 2^modes. Throws DomainError unless
  /// 1 <= modes <= 14.
  explicit FockSpace(int modes);

  /// Sectors 0..max_particles only. Throws DomainError for modes outside
  /// [1, 63], max_particles outside [0, modes] or dimension above 16384.
  FockSpace(int modes, int max_particles);

  int modes() const { return modes_; }
  int max_particles() const { return max_particles_; }
  bool complete() const { return max_particles_ == modes_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }

  std::uint64_t state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  /// Index of a basis mask, -1 if the mask is not part of the space.
  Eigen::Index index_of(std::uint64_t mask) const;

  /// First index and size of the k-particle sector.
  Eigen::Index sector_begin(int k) const;
  Eigen::Index sector_size(int k) const;
  /// Particle number of basis state i.
  int particles(Eigen::Index i) const;

 private:
  void enumerate();

  int modes_;
  int max_particles_;
  std::vector<std::uint64_t> states_;
  std::vector<Eigen::Index> sector_start_;
  std::unordered_map<std::uint64_t, Eigen::Index> index_;
};

FockSpace build_fock(int modes);

struct FockOperator {
  std::string label;
  SparseOp matrix;
};

/// c+_j and c_j for 1 <= j <= modes; sign (-1)^(occupied modes below j).
/// In a cut space, c+_j drops states that would leave it.
FockOperator creation_op(const FockSpace& space, int j);
FockOperator annihilation_op(const FockSpace& space, int j);
FockOperator number_op(const FockSpace& space);
FockOperator identity_op(const FockSpace& space);

/// sum_ij a(i, j) c+_{i+1} c_{j+1}. Throws DomainError if a is not square or
/// larger than the number of modes.
FockOperator second_quantize(const FockSpace& space, const Eigen::MatrixXcd& a,
                             std::string label = "other");
FockOperator second_quantize(const FockSpace& space, const Eigen::MatrixXd& a,
                             std::string label = "other");

/// sum_j x(j) c+_{j+1} and sum_j y(j) c_{j+1}.
SparseOp creation_combination(const FockSpace& space, const Eigen::VectorXcd& x);
SparseOp annihilation_combination(const FockSpace& space, const Eigen::VectorXcd& y);

SparseOp anticommutator(const SparseOp& a, const SparseOp& b);
SparseOp commutator(const SparseOp& a, const SparseOp& b);
double max_abs(const SparseOp& a);

/// Dense block of an operator between the k-particle sectors.
Eigen::MatrixXcd sector_block(const FockSpace& space, const SparseOp& op, int k);

/// Vacuum state and the k-particle state x1 ^ x2 ^ ... ^ xk of one-particle
/// vectors, built as (x1 . c+)(x2 . c+) ... |vac>.
Eigen::VectorXcd vacuum(const FockSpace& space);
Eigen::VectorXcd wedge_state(const FockSpace& space, const std::vector<Eigen::VectorXcd>& orbitals);

/// Pseudo-fermions d+_k = sum_j x_k(j) c+_j and d_k = sum_j y_k(j) c_j with
/// y_a . x_b = delta_ab.
struct PseudoFermionSet {
  int count = 0;
  std::vector<FockOperator> d_dag;
  std::vector<FockOperator> d;
  /// Columns x_k and y_k.
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  /// One-particle energies of the pseudo-modes.
  Eigen::VectorXcd eigenvalues;
  std::string source;
};

/// From the exact eigensystem of the modes x modes truncation of H; one
/// pseudo-mode per Fock mode. Throws PreconditionError if the eigensystem
/// size differs from the mode count or its Gram defect exceeds tol.
PseudoFermionSet build_pseudo_fermions(const FockSpace& space, const TruncationEigensystem& sys,
                                       double tol = 1e-10);

/// From a ladder-built biorthogonal system with sys.dim == modes. Pairs are
/// rescaled (x -> a x, y -> y / a) so that T+ x_k = w_k x_{k+1} with the
/// generator weight w_k = ladder_weight(k); this is the normalization in
/// which the T operators take the generator pattern in d-form.
PseudoFermionSet build_pseudo_fermions(const FockSpace& space, const ModelParams& params,
                                       const BiorthogonalSystem& sys, double tol = 1e-10);

struct AnticommutatorDefects {
  /// max over i, j of |{d+_i, d_j} - delta_ij|
  double mixed = 0.0;
  /// max over i, j of |{d+_i, d+_j}|
  double creators = 0.0;
  /// max over i, j of |{d_i, d_j}|
  double annihilators = 0.0;
};

/// Requires a complete space; in a cut space the top sector breaks the
/// relations by construction. Throws PreconditionError otherwise.
AnticommutatorDefects anticommutator_defects(const FockSpace& space, const PseudoFermionSet& pf);

/// Same for the bare c+, c.
AnticommutatorDefects canonical_anticommutator_defects(const FockSpace& space);

/// max |H - sum_k eps_k d+_k d_k| over all matrix elements, with H the
/// second-quantized modes x modes truncation and eps_k = pf.eigenvalues.
double diagonal_form_residual(const FockSpace& space, const ModelParams& params,
                              const PseudoFermionSet& pf);

struct FockTOperators {
  /// Second-quantized one-particle T0, T+, T-.
  FockOperator t0, tplus, tminus;
  /// sum (4k - 3)/4 d+_k d_k, sum w_k d+_{k+1} d_k and sum w_k d+_k d_{k+1}.
  FockOperator t0_bilinear, tplus_bilinear, tminus_bilinear;
  /// max over pseudo-modes k < count and the three operators of
  /// |(T_comb - T_bil) d+_k |vac>|.
  double agreement = 0.0;
};

FockTOperators build_t_operators_fock(const FockSpace& space, const ModelParams& params,
                                      const PseudoFermionSet& pf);

/// Largest residual of [T-, T0] = T-, [T0, T+] = T+, [T-, T+] = T0 applied to
/// the one-particle states d+_k |vac>, k < count - 1.
double su11_residual(const FockSpace& space, const PseudoFermionSet& pf, const SparseOp& t0,
                     const SparseOp& tplus, const SparseOp& tminus);

/// Hermitian positive definite sum_k conj(y_k) y_k^T for an eigensystem with
/// left^T right = I. Makes <metric x_a, x_b> = delta_ab.
Eigen::MatrixXcd biorthogonal_metric(const TruncationEigensystem& sys);

/// Applies the k-fold antisymmetric lift of a one-particle operator G to a
/// k-particle vector: e_T -> sum_S det(G[S, T]) e_S.
Eigen::VectorXcd apply_compound(const FockSpace& space, const Eigen::MatrixXcd& g,
                                const Eigen::VectorXcd& phi);

/// <D phi, psi> with D the lift of the one-particle metric. phi and psi must
/// both lie in one particle-number sector (DomainError otherwise).
Complex physical_inner_fock(const FockSpace& space, const Eigen::MatrixXcd& metric,
                            const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi);

/// Sector of a Fock vector; -1 for the zero vector; throws DomainError if it
/// spans several sectors.
int sector_of(const FockSpace& space, const Eigen::VectorXcd& v);

struct JointSpectrumPoint {
  double energy = 0.0;
  int number = 0;
  std::uint64_t occupation = 0;
};

/// All occupations of the first m_modes with at most n_max particles, with
/// the analytic mode energies. Ordered by particle number, then mask.
/// Throws DomainError unless 0 <= n_max <= m_modes <= 30 and the point count
/// stays below 2^22.
std::vector<JointSpectrumPoint> joint_spectrum(const ModelParams& params, int m_modes, int n_max);

}  // namespace nhf
