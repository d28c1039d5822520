#include "nhfermion/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "nhfermion/errors.hpp"

namespace nhf {

namespace {

using Triplet = Eigen::Triplet<Complex>;

int popcount(std::uint64_t m) { return std::popcount(m); }

/// (-1)^(number of occupied modes below bit j)
double jw_sign(std::uint64_t mask, int j) {
  const std::uint64_t below = mask & ((std::uint64_t{1} << j) - 1);
  return (popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

void require_mode(const FockSpace& space, int j, const char* who) {
  if (j < 1 || j > space.modes()) {
    throw DomainError(std::string(who) + ": mode index " + std::to_string(j) + " outside [1, " +
                      std::to_string(space.modes()) + "]");
  }
}

SparseOp from_triplets(const FockSpace& space, const std::vector<Triplet>& t) {
  SparseOp m(space.dimension(), space.dimension());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

FockSpace::FockSpace(int modes) : modes_(modes), max_particles_(modes) {
  if (modes < 1 || modes > kMaxCompleteModes) {
    throw DomainError("FockSpace: complete space needs 1 <= modes <= " +
                      std::to_string(kMaxCompleteModes) + ", got " + std::to_string(modes));
  }
  enumerate();
}

FockSpace::FockSpace(int modes, int max_particles) : modes_(modes), max_particles_(max_particles) {
  if (modes < 1 || modes > 63) {
    throw DomainError("FockSpace: modes must lie in [1, 63], got " + std::to_string(modes));
  }
  if (max_particles < 0 || max_particles > modes) {
    throw DomainError("FockSpace: max_particles must lie in [0, modes]");
  }
  double dim = 0.0;
  for (int k = 0; k <= max_particles; ++k) dim += binomial(modes, k);
  if (dim > static_cast<double>(kMaxDimension)) {
    throw DomainError("FockSpace: dimension " + std::to_string(static_cast<long long>(dim)) +
                      " exceeds the cap " + std::to_string(kMaxDimension));
  }
  enumerate();
}

void FockSpace::enumerate() {
  states_.clear();
  sector_start_.assign(static_cast<std::size_t>(max_particles_) + 2, 0);
  for (int k = 0; k <= max_particles_; ++k) {
    sector_start_[static_cast<std::size_t>(k)] = static_cast<Eigen::Index>(states_.size());
    if (k == 0) {
      states_.push_back(0);
      continue;
    }
    // masks with k bits in increasing order (Gosper's hack)
    const std::uint64_t end = std::uint64_t{1} << modes_;
    for (std::uint64_t m = (std::uint64_t{1} << k) - 1; m < end;) {
      states_.push_back(m);
      const std::uint64_t c = m & (~m + 1);
      const std::uint64_t r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  sector_start_[static_cast<std::size_t>(max_particles_) + 1] =
      static_cast<Eigen::Index>(states_.size());
  index_.clear();
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    index_.emplace(states_[i], static_cast<Eigen::Index>(i));
  }
}

Eigen::Index FockSpace::index_of(std::uint64_t mask) const {
  const auto it = index_.find(mask);
  return it == index_.end() ? -1 : it->second;
}

Eigen::Index FockSpace::sector_begin(int k) const {
  if (k < 0 || k > max_particles_) return dimension();
  return sector_start_[static_cast<std::size_t>(k)];
}

Eigen::Index FockSpace::sector_size(int k) const {
  if (k < 0 || k > max_particles_) return 0;
  return sector_start_[static_cast<std::size_t>(k) + 1] - sector_start_[static_cast<std::size_t>(k)];
}

int FockSpace::particles(Eigen::Index i) const { return popcount(state(i)); }

FockSpace build_fock(int modes) { return FockSpace(modes); }

FockOperator creation_op(const FockSpace& space, int j) {
  require_mode(space, j, "creation_op");
  const int bit = j - 1;
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    const std::uint64_t s = space.state(i);
    if (s >> bit & 1U) continue;
    const Eigen::Index target = space.index_of(s | (std::uint64_t{1} << bit));
    if (target < 0) continue;
    t.emplace_back(target, i, jw_sign(s, bit));
  }
  return {"c+" + std::to_string(j), from_triplets(space, t)};
}

FockOperator annihilation_op(const FockSpace& space, int j) {
  require_mode(space, j, "annihilation_op");
  FockOperator c = creation_op(space, j);
  return {"c" + std::to_string(j), SparseOp(c.matrix.transpose())};
}

FockOperator number_op(const FockSpace& space) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    t.emplace_back(i, i, static_cast<double>(space.particles(i)));
  }
  return {"N", from_triplets(space, t)};
}

FockOperator identity_op(const FockSpace& space) {
  SparseOp id(space.dimension(), space.dimension());
  id.setIdentity();
  return {"I", id};
}

FockOperator second_quantize(const FockSpace& space, const Eigen::MatrixXcd& a, std::string label) {
  if (a.rows() != a.cols()) {
    throw DomainError("second_quantize: coefficient matrix must be square");
  }
  if (a.rows() > space.modes()) {
    throw DomainError("second_quantize: coefficient matrix of size " + std::to_string(a.rows()) +
                      " exceeds the " + std::to_string(space.modes()) + " available modes");
  }
  const int n = static_cast<int>(a.rows());
  std::vector<Triplet> t;
  for (Eigen::Index col = 0; col < space.dimension(); ++col) {
    const std::uint64_t s = space.state(col);
    for (int j = 0; j < n; ++j) {
      if (!(s >> j & 1U)) continue;
      const double sj = jw_sign(s, j);
      const std::uint64_t removed = s & ~(std::uint64_t{1} << j);
      for (int i = 0; i < n; ++i) {
        const Complex coeff = a(i, j);
        if (coeff == Complex(0.0)) continue;
        if (removed >> i & 1U) continue;
        const Eigen::Index row = space.index_of(removed | (std::uint64_t{1} << i));
        if (row < 0) continue;
        t.emplace_back(row, col, coeff * (sj * jw_sign(removed, i)));
      }
    }
  }
  return {std::move(label), from_triplets(space, t)};
}

FockOperator second_quantize(const FockSpace& space, const Eigen::MatrixXd& a, std::string label) {
  return second_quantize(space, Eigen::MatrixXcd(a.cast<Complex>()), std::move(label));
}

SparseOp creation_combination(const FockSpace& space, const Eigen::VectorXcd& x) {
  if (x.size() > space.modes()) {
    throw DomainError("creation_combination: coefficient vector longer than the mode count");
  }
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    const std::uint64_t s = space.state(i);
    for (int j = 0; j < x.size(); ++j) {
      if (x(j) == Complex(0.0) || (s >> j & 1U)) continue;
      const Eigen::Index target = space.index_of(s | (std::uint64_t{1} << j));
      if (target < 0) continue;
      t.emplace_back(target, i, x(j) * jw_sign(s, j));
    }
  }
  return from_triplets(space, t);
}

SparseOp annihilation_combination(const FockSpace& space, const Eigen::VectorXcd& y) {
  // c_j is the transpose of c+_j, so sum y_j c_j = (sum y_j c+_j)^T.
  return SparseOp(creation_combination(space, y).transpose());
}

SparseOp anticommutator(const SparseOp& a, const SparseOp& b) {
  return SparseOp(a * b + b * a);
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) { return SparseOp(a * b - b * a); }

double max_abs(const SparseOp& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

Eigen::MatrixXcd sector_block(const FockSpace& space, const SparseOp& op, int k) {
  const Eigen::Index b = space.sector_begin(k);
  const Eigen::Index n = space.sector_size(k);
  return Eigen::MatrixXcd(op).block(b, b, n, n);
}

Eigen::VectorXcd vacuum(const FockSpace& space) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dimension());
  v(0) = 1.0;
  return v;
}

Eigen::VectorXcd wedge_state(const FockSpace& space, const std::vector<Eigen::VectorXcd>& orbitals) {
  if (static_cast<int>(orbitals.size()) > space.max_particles()) {
    throw DomainError("wedge_state: more orbitals than the space holds particles");
  }
  Eigen::VectorXcd v = vacuum(space);
  for (auto it = orbitals.rbegin(); it != orbitals.rend(); ++it) {
    v = creation_combination(space, *it) * v;
  }
  return v;
}

namespace {

PseudoFermionSet assemble(const FockSpace& space, Eigen::MatrixXcd right, Eigen::MatrixXcd left,
                          Eigen::VectorXcd eigenvalues, std::string source) {
  PseudoFermionSet pf;
  pf.count = static_cast<int>(right.cols());
  pf.right = std::move(right);
  pf.left = std::move(left);
  pf.eigenvalues = std::move(eigenvalues);
  pf.source = std::move(source);
  for (int k = 0; k < pf.count; ++k) {
    const std::string id = std::to_string(k + 1);
    pf.d_dag.push_back({"d+" + id, creation_combination(space, pf.right.col(k))});
    pf.d.push_back({"d" + id, annihilation_combination(space, pf.left.col(k))});
  }
  return pf;
}

double gram_defect(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right) {
  const Eigen::Index n = right.cols();
  return (left.transpose() * right - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace

PseudoFermionSet build_pseudo_fermions(const FockSpace& space, const TruncationEigensystem& sys,
                                       double tol) {
  if (sys.right.rows() != space.modes() || sys.right.cols() != space.modes()) {
    throw PreconditionError("build_pseudo_fermions: eigensystem size " +
                            std::to_string(sys.right.rows()) + " does not match " +
                            std::to_string(space.modes()) + " modes");
  }
  const double defect = gram_defect(sys.left, sys.right);
  if (!(defect <= tol)) {
    throw PreconditionError("build_pseudo_fermions: biorthogonality defect " +
                            std::to_string(defect) + " exceeds tolerance");
  }
  return assemble(space, sys.right, sys.left, sys.eigenvalues, "truncation eigensystem");
}

PseudoFermionSet build_pseudo_fermions(const FockSpace& space, const ModelParams& params,
                                       const BiorthogonalSystem& sys, double tol) {
  if (sys.dim != space.modes()) {
    throw PreconditionError("build_pseudo_fermions: biorthogonal system dimension " +
                            std::to_string(sys.dim) + " does not match " +
                            std::to_string(space.modes()) + " modes");
  }
  if (!(sys.gram_defect <= tol)) {
    throw PreconditionError("build_pseudo_fermions: biorthogonality defect " +
                            std::to_string(sys.gram_defect) + " exceeds tolerance");
  }
  const Eigen::MatrixXd tplus = build_t_operators(params, sys.dim).tplus.entries;
  Eigen::MatrixXd right = sys.right;
  Eigen::MatrixXd left = sys.left;
  double scale = 1.0;
  for (int k = 1; k < sys.count; ++k) {
    // T+ x_k = rho_k x_{k+1} for the stored vectors; want w_k in its place
    const double rho = sys.left.col(k).dot(tplus * sys.right.col(k - 1));
    scale *= rho / ladder_weight(k);
    right.col(k) *= scale;
    left.col(k) /= scale;
  }
  Eigen::VectorXcd eps(sys.count);
  for (int k = 0; k < sys.count; ++k) eps(k) = sys.eigenvalues[static_cast<std::size_t>(k)];
  return assemble(space, right.cast<Complex>(), left.cast<Complex>(), eps, "ladder");
}

AnticommutatorDefects anticommutator_defects(const FockSpace& space, const PseudoFermionSet& pf) {
  if (!space.complete()) {
    throw PreconditionError("anticommutator_defects: needs the complete Fock space");
  }
  const SparseOp id = identity_op(space).matrix;
  AnticommutatorDefects out;
  for (int i = 0; i < pf.count; ++i) {
    for (int j = 0; j < pf.count; ++j) {
      SparseOp mixed = anticommutator(pf.d_dag[i].matrix, pf.d[j].matrix);
      if (i == j) mixed -= id;
      out.mixed = std::max(out.mixed, max_abs(mixed));
      out.creators =
          std::max(out.creators, max_abs(anticommutator(pf.d_dag[i].matrix, pf.d_dag[j].matrix)));
      out.annihilators =
          std::max(out.annihilators, max_abs(anticommutator(pf.d[i].matrix, pf.d[j].matrix)));
    }
  }
  return out;
}

AnticommutatorDefects canonical_anticommutator_defects(const FockSpace& space) {
  if (!space.complete()) {
    throw PreconditionError("canonical_anticommutator_defects: needs the complete Fock space");
  }
  const SparseOp id = identity_op(space).matrix;
  std::vector<SparseOp> cd, c;
  for (int j = 1; j <= space.modes(); ++j) {
    cd.push_back(creation_op(space, j).matrix);
    c.push_back(annihilation_op(space, j).matrix);
  }
  AnticommutatorDefects out;
  for (std::size_t i = 0; i < cd.size(); ++i) {
    for (std::size_t j = 0; j < cd.size(); ++j) {
      SparseOp mixed = anticommutator(cd[i], c[j]);
      if (i == j) mixed -= id;
      out.mixed = std::max(out.mixed, max_abs(mixed));
      out.creators = std::max(out.creators, max_abs(anticommutator(cd[i], cd[j])));
      out.annihilators = std::max(out.annihilators, max_abs(anticommutator(c[i], c[j])));
    }
  }
  return out;
}

double diagonal_form_residual(const FockSpace& space, const ModelParams& params,
                              const PseudoFermionSet& pf) {
  const SparseOp h = second_quantize(space, build_hamiltonian(params, space.modes()).entries).matrix;
  SparseOp diag(space.dimension(), space.dimension());
  for (int k = 0; k < pf.count; ++k) {
    diag += SparseOp(pf.eigenvalues(k) * (pf.d_dag[k].matrix * pf.d[k].matrix));
  }
  return max_abs(SparseOp(h - diag));
}

FockTOperators build_t_operators_fock(const FockSpace& space, const ModelParams& params,
                                      const PseudoFermionSet& pf) {
  const LadderOperators one = build_t_operators(params, space.modes());
  FockTOperators t;
  t.t0 = second_quantize(space, one.t0.entries, "T0");
  t.tplus = second_quantize(space, one.tplus.entries, "T+");
  t.tminus = second_quantize(space, one.tminus.entries, "T-");

  const Eigen::Index dim = space.dimension();
  SparseOp b0(dim, dim), bp(dim, dim), bm(dim, dim);
  for (int k = 1; k <= pf.count; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    b0 += SparseOp(((4.0 * k - 3.0) / 4.0) * (pf.d_dag[i].matrix * pf.d[i].matrix));
    if (k < pf.count) {
      const double w = ladder_weight(k);
      bp += SparseOp(w * (pf.d_dag[i + 1].matrix * pf.d[i].matrix));
      bm += SparseOp(w * (pf.d_dag[i].matrix * pf.d[i + 1].matrix));
    }
  }
  t.t0_bilinear = {"T0 (d-form)", b0};
  t.tplus_bilinear = {"T+ (d-form)", bp};
  t.tminus_bilinear = {"T- (d-form)", bm};

  // T+ takes the top pseudo-mode out of the span, so compare below it
  const Eigen::VectorXcd vac = vacuum(space);
  double worst = 0.0;
  for (int k = 0; k + 1 < pf.count; ++k) {
    const Eigen::VectorXcd v = pf.d_dag[static_cast<std::size_t>(k)].matrix * vac;
    worst = std::max(worst, ((t.t0.matrix - b0) * v).cwiseAbs().maxCoeff());
    worst = std::max(worst, ((t.tplus.matrix - bp) * v).cwiseAbs().maxCoeff());
    worst = std::max(worst, ((t.tminus.matrix - bm) * v).cwiseAbs().maxCoeff());
  }
  t.agreement = worst;
  return t;
}

double su11_residual(const FockSpace& space, const PseudoFermionSet& pf, const SparseOp& t0,
                     const SparseOp& tplus, const SparseOp& tminus) {
  const SparseOp r1 = SparseOp(commutator(tminus, t0) - tminus);
  const SparseOp r2 = SparseOp(commutator(t0, tplus) - tplus);
  const SparseOp r3 = SparseOp(commutator(tminus, tplus) - t0);
  const Eigen::VectorXcd vac = vacuum(space);
  double worst = 0.0;
  for (int k = 0; k + 2 < pf.count; ++k) {
    const Eigen::VectorXcd v = pf.d_dag[static_cast<std::size_t>(k)].matrix * vac;
    for (const SparseOp* r : {&r1, &r2, &r3}) {
      worst = std::max(worst, ((*r) * v).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Eigen::MatrixXcd biorthogonal_metric(const TruncationEigensystem& sys) {
  return sys.left.conjugate() * sys.left.transpose();
}

int sector_of(const FockSpace& space, const Eigen::VectorXcd& v) {
  if (v.size() != space.dimension()) {
    throw DomainError("sector_of: vector length does not match the Fock dimension");
  }
  int found = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == Complex(0.0)) continue;
    const int k = space.particles(i);
    if (found >= 0 && k != found) {
      throw DomainError("Fock vector mixes the " + std::to_string(found) + "- and " +
                        std::to_string(k) + "-particle sectors");
    }
    found = k;
  }
  return found;
}

Eigen::VectorXcd apply_compound(const FockSpace& space, const Eigen::MatrixXcd& g,
                                const Eigen::VectorXcd& phi) {
  if (g.rows() != space.modes() || g.cols() != space.modes()) {
    throw DomainError("apply_compound: one-particle operator must be modes x modes");
  }
  const int k = sector_of(space, phi);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(space.dimension());
  if (k < 0) return out;
  if (k == 0) {
    out(0) = phi(0);
    return out;
  }
  const Eigen::Index begin = space.sector_begin(k);
  const Eigen::Index size = space.sector_size(k);
  auto bits = [](std::uint64_t m) {
    std::vector<int> b;
    for (int j = 0; m != 0; ++j, m >>= 1) {
      if (m & 1U) b.push_back(j);
    }
    return b;
  };
  if (k == 1) {
    const Eigen::VectorXcd v = g * phi.segment(begin, size);
    out.segment(begin, size) = v;
    return out;
  }
  if (k == 2) {
    // antisymmetric coefficient matrix Phi transforms as G Phi G^T
    const int m = space.modes();
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = begin; i < begin + size; ++i) {
      const std::vector<int> b = bits(space.state(i));
      coeff(b[0], b[1]) = phi(i);
      coeff(b[1], b[0]) = -phi(i);
    }
    const Eigen::MatrixXcd mapped = g * coeff * g.transpose();
    for (Eigen::Index i = begin; i < begin + size; ++i) {
      const std::vector<int> b = bits(space.state(i));
      out(i) = mapped(b[0], b[1]);
    }
    return out;
  }
  std::vector<std::vector<int>> occupied(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) {
    occupied[static_cast<std::size_t>(i)] = bits(space.state(begin + i));
  }
  Eigen::MatrixXcd minor(k, k);
  for (Eigen::Index c = 0; c < size; ++c) {
    if (phi(begin + c) == Complex(0.0)) continue;
    const std::vector<int>& cols = occupied[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < size; ++r) {
      const std::vector<int>& rows = occupied[static_cast<std::size_t>(r)];
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) minor(a, b) = g(rows[a], cols[b]);
      }
      out(begin + r) += minor.determinant() * phi(begin + c);
    }
  }
  return out;
}

Complex physical_inner_fock(const FockSpace& space, const Eigen::MatrixXcd& metric,
                            const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi) {
  const int kp = sector_of(space, phi);
  const int kq = sector_of(space, psi);
  if (kp >= 0 && kq >= 0 && kp != kq) {
    throw DomainError("physical_inner_fock: arguments lie in different particle-number sectors");
  }
  return apply_compound(space, metric, phi).dot(psi);
}

std::vector<JointSpectrumPoint> joint_spectrum(const ModelParams& params, int m_modes, int n_max) {
  if (m_modes < 0 || m_modes > 30 || n_max < 0 || n_max > m_modes) {
    throw DomainError("joint_spectrum: need 0 <= n_max <= m_modes <= 30");
  }
  double count = 0.0;
  for (int k = 0; k <= n_max; ++k) count += binomial(m_modes, k);
  if (count > static_cast<double>(1 << 22)) {
    throw DomainError("joint_spectrum: too many occupation patterns requested");
  }
  std::vector<JointSpectrumPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back({0.0, 0, 0});
  for (int n = 1; n <= n_max; ++n) {
    std::uint64_t m = (std::uint64_t{1} << n) - 1;
    const std::uint64_t end = std::uint64_t{1} << m_modes;
    while (m < end) {
      double e = 0.0;
      for (int j = 0; j < m_modes; ++j) {
        if (m >> j & 1U) e += mode_energy(params, j + 1);
      }
      out.push_back({e, n, m});
      const std::uint64_t c = m & (~m + 1);
      const std::uint64_t r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  return out;
}

}  // namespace nhf
