#include "gaussep/symplectic.hpp"

#include <cmath>

namespace gaussep {

const char* to_string(Ordering o) {
  return o == Ordering::ModeWise ? "modewise" : "position-momentum";
}

Ordering ordering_from_string(const std::string& s) {
  if (s == "modewise" || s == "mode-wise") return Ordering::ModeWise;
  if (s == "position-momentum" || s == "pm") return Ordering::PositionMomentum;
  throw DomainError("unknown ordering '" + s + "'");
}

void ModeLayout::validate() const {
  if (m < 0 || n < 0 || m + n < 1)
    throw DomainError("mode layout needs m, n ≥ 0 and m + n ≥ 1 (got m=" +
                      std::to_string(m) + ", n=" + std::to_string(n) + ")");
}

Eigen::PermutationMatrix<Eigen::Dynamic> modewise_to_pm(int k) {
  // Eigen stores the destination of each source index.
  Eigen::VectorXi image(2 * k);
  for (int j = 0; j < k; ++j) {
    image(2 * j) = j;
    image(2 * j + 1) = k + j;
  }
  return Eigen::PermutationMatrix<Eigen::Dynamic>(image);
}

QCM::QCM(ModeLayout layout, Eigen::MatrixXd mat, const Tolerances& tol)
    : layout_(layout), mat_(std::move(mat)) {
  layout_.validate();
  if (mat_.rows() != layout_.dim() || mat_.cols() != layout_.dim())
    throw DomainError("QCM: matrix is " + std::to_string(mat_.rows()) + "x" +
                      std::to_string(mat_.cols()) + ", layout needs " +
                      std::to_string(layout_.dim()));
  if (!mat_.allFinite()) throw DomainError("QCM: matrix has non-finite entries");
  mat_ = symmetrize(mat_);
  const double lmin = min_eigenvalue(mat_);
  if (lmin <= tol.psd * spectral_norm(mat_))
    throw DomainError("QCM: matrix is not strictly positive definite");
}

QCM QCM::trusted(ModeLayout layout, Eigen::MatrixXd mat) {
  QCM q;
  q.layout_ = layout;
  q.mat_ = symmetrize(mat);
  return q;
}

QCM QCM::modewise() const {
  if (layout_.ordering == Ordering::ModeWise) return *this;
  return reorder(*this, Ordering::ModeWise);
}

Eigen::MatrixXd QCM::va() const {
  const Index da = 2 * Index(layout_.m);
  return modewise().mat_.topLeftCorner(da, da);
}

Eigen::MatrixXd QCM::vb() const {
  const Index db = 2 * Index(layout_.n);
  return modewise().mat_.bottomRightCorner(db, db);
}

Eigen::MatrixXd QCM::x() const {
  const Index da = 2 * Index(layout_.m), db = 2 * Index(layout_.n);
  return modewise().mat_.topRightCorner(da, db);
}

QCM reorder(const QCM& v, Ordering target) {
  if (v.layout().ordering == target) return v;
  const auto p = modewise_to_pm(v.layout().modes());
  Eigen::MatrixXd out = target == Ordering::PositionMomentum
                            ? Eigen::MatrixXd(p * v.matrix() * p.transpose())
                            : Eigen::MatrixXd(p.transpose() * v.matrix() * p);
  return QCM::trusted(v.layout().with_ordering(target), std::move(out));
}

QcmCheck is_qcm(const Eigen::MatrixXd& v, const ModeLayout& layout,
                const Tolerances& tol) {
  layout.validate();
  if (v.rows() != layout.dim() || v.cols() != layout.dim())
    throw DomainError("is_qcm: matrix size does not match the layout");
  const double scale = spectral_norm(symmetrize(v));
  if ((v - v.transpose()).norm() > tol.alg * std::max(scale, 1.0))
    throw DomainError("is_qcm: matrix is not symmetric");
  const ComplexPair<double> h(symmetrize(v), omega(layout));
  const double lmin = min_eigenvalue(h);
  return {lmin >= -tol.psd * scale, lmin};
}

Eigen::VectorXd symplectic_spectrum(const QCM& v, const Tolerances& tol) {
  return symplectic_spectrum(v.modewise().matrix(), tol);
}

WilliamsonDecomposition<double> williamson(const QCM& v,
                                           const Tolerances& tol) {
  return williamson(v.modewise().matrix(), tol);
}

Eigen::VectorXd momentum_flip_signs(const ModeLayout& layout,
                                    const std::vector<int>& flipped_modes) {
  const int k = layout.modes();
  Eigen::VectorXd s = Eigen::VectorXd::Ones(2 * k);
  for (int mode : flipped_modes) {
    if (mode < 0 || mode >= k) throw DomainError("mode index out of range");
    const Index p_index =
        layout.ordering == Ordering::ModeWise ? 2 * mode + 1 : k + mode;
    s(p_index) = -1.0;
  }
  return s;
}

PartialTransposeMask partial_transpose_mask(const ModeLayout& layout) {
  std::vector<int> b_modes;
  for (int j = 0; j < layout.n; ++j) b_modes.push_back(layout.m + j);
  return {layout, momentum_flip_signs(layout, b_modes)};
}

QCM sign_congruence(const QCM& v, const Eigen::VectorXd& signs) {
  Eigen::MatrixXd out = v.matrix();
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i)
      if (signs(i) * signs(j) < 0) out(i, j) = -out(i, j);
  return QCM::trusted(v.layout(), std::move(out));
}

QCM partial_transpose(const QCM& v) {
  if (v.layout().n < 1)
    throw DomainError("partial_transpose: party B has no modes");
  return sign_congruence(v, partial_transpose_mask(v.layout()).theta);
}

namespace {

PptResult ppt_from(const QCM& v, const QCM& transposed, const Tolerances& tol) {
  if (!is_qcm(v, tol).valid)
    throw DomainError("is_ppt: input is not a valid quantum covariance matrix");
  const Eigen::VectorXd nu = symplectic_spectrum(transposed, tol);
  PptResult r;
  r.min_symplectic_eigenvalue = nu.minCoeff();
  r.ppt = r.min_symplectic_eigenvalue >= 1.0 - tol.verdict;
  r.distillable = !r.ppt;
  return r;
}

}  // namespace

PptResult is_ppt(const QCM& v, const Tolerances& tol) {
  return ppt_from(v, partial_transpose(v), tol);
}

PptResult is_ppt_across(const QCM& v, const std::vector<int>& flipped_modes,
                        const Tolerances& tol) {
  return ppt_from(v,
                  sign_congruence(v, momentum_flip_signs(v.layout(),
                                                         flipped_modes)),
                  tol);
}

double TMSVParams::c() const { return std::cosh(2.0 * r); }
double TMSVParams::s() const { return std::sinh(2.0 * r); }

QCM tmsv(double r) {
  const TMSVParams p{r};
  const double c = p.c(), s = p.s();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = c;
  v(0, 2) = v(2, 0) = s;
  v(1, 3) = v(3, 1) = -s;
  return QCM(ModeLayout{1, 1}, std::move(v));
}

QCM thermal(double nu, int m, int n) {
  if (!(nu >= 1.0)) throw DomainError("thermal: ν must be ≥ 1");
  const ModeLayout layout{m, n};
  layout.validate();
  return QCM(layout, nu * Eigen::MatrixXd::Identity(layout.dim(), layout.dim()));
}

QCM swap_parties(const QCM& v) {
  const QCM mw = v.modewise();
  const int m = v.m(), n = v.n();
  std::vector<int> perm;
  for (int j = 0; j < n; ++j) perm.push_back(m + j);
  for (int j = 0; j < m; ++j) perm.push_back(j);
  return QCM::trusted(ModeLayout{n, m}, permute_modes(mw.matrix(), perm));
}

Eigen::MatrixXd permute_modes(const Eigen::MatrixXd& v,
                              const std::vector<int>& perm) {
  const Index k = Index(perm.size());
  if (v.rows() != 2 * k) throw DomainError("permute_modes: size mismatch");
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      out.block(2 * i, 2 * j, 2, 2) = v.block(2 * perm[i], 2 * perm[j], 2, 2);
  return out;
}

QCM product_state(const Eigen::MatrixXd& gamma_a,
                  const Eigen::MatrixXd& gamma_b) {
  return QCM(ModeLayout{int(gamma_a.rows() / 2), int(gamma_b.rows() / 2)},
             direct_sum(gamma_a, gamma_b));
}

QCM bipartite_direct_sum(const QCM& first, const QCM& second) {
  const QCM f = first.modewise(), s = second.modewise();
  const int m1 = f.m(), n1 = f.n(), m2 = s.m(), n2 = s.n();
  const Eigen::MatrixXd sum = direct_sum(f.matrix(), s.matrix());
  // Current mode order: A1, B1, A2, B2. Target: A1, A2, B1, B2.
  std::vector<int> perm;
  for (int j = 0; j < m1; ++j) perm.push_back(j);
  for (int j = 0; j < m2; ++j) perm.push_back(m1 + n1 + j);
  for (int j = 0; j < n1; ++j) perm.push_back(m1 + j);
  for (int j = 0; j < n2; ++j) perm.push_back(m1 + n1 + m2 + j);
  return QCM(ModeLayout{m1 + m2, n1 + n2}, permute_modes(sum, perm));
}

}  // namespace gaussep
