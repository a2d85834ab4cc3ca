#pragma once

// Canonical-operator bookkeeping: symplectic forms, quantum covariance
// matrices (QCMs), Williamson normal form, symplectic spectra and the Gaussian
// partial transpose.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gaussep/linalg.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

/// (x₁, p₁, x₂, p₂, …) versus (x₁, …, x_k, p₁, …, p_k).
enum class Ordering { ModeWise, PositionMomentum };

const char* to_string(Ordering o);
Ordering ordering_from_string(const std::string& s);

/// Mode counts of the two parties and the canonical-operator ordering.
/// Party A always precedes party B.
struct ModeLayout {
  int m = 0;
  int n = 0;
  Ordering ordering = Ordering::ModeWise;

  int modes() const { return m + n; }
  Index dim() const { return 2 * Index(m + n); }
  void validate() const;
  ModeLayout with_ordering(Ordering o) const { return {m, n, o}; }
  bool operator==(const ModeLayout&) const = default;
};

/// Symplectic form of `k` modes in the given ordering.
template <typename T = double>
MatrixX<T> omega_modes(int k, Ordering ordering = Ordering::ModeWise) {
  MatrixX<T> om = MatrixX<T>::Zero(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    if (ordering == Ordering::ModeWise) {
      om(2 * j, 2 * j + 1) = T(1);
      om(2 * j + 1, 2 * j) = T(-1);
    } else {
      om(j, k + j) = T(1);
      om(k + j, j) = T(-1);
    }
  }
  return om;
}

template <typename T = double>
MatrixX<T> omega(const ModeLayout& layout) {
  layout.validate();
  return omega_modes<T>(layout.modes(), layout.ordering);
}

/// Permutation P with v_pm = P·v_mw for `k` modes; V_pm = P V_mw Pᵀ.
Eigen::PermutationMatrix<Eigen::Dynamic> modewise_to_pm(int k);

/// Sorted symplectic eigenvalues (non-increasing) of a positive matrix given
/// in mode-wise ordering; each pair ±iν of ΩV is reported once.
template <typename Derived>
VectorX<typename Derived::Scalar> symplectic_spectrum(
    const Eigen::MatrixBase<Derived>& v, const Tolerances& tol = {}) {
  using T = typename Derived::Scalar;
  const Index d = v.rows();
  if (d % 2 != 0 || v.cols() != d)
    throw DomainError("symplectic_spectrum: dimension must be even");
  const Index k = d / 2;
  const MatrixX<T> vs = symmetrize(v);
  SpectralInfo<T> info;
  const MatrixX<T> root = sym_sqrt(vs, T(0), &info);
  if (info.min_eigenvalue <= T(tol.psd) * spectral_norm(vs))
    throw DomainError("symplectic_spectrum: matrix is not positive definite");
  MatrixX<T> kk = root * omega_modes<T>(int(k)) * root;
  kk = (kk - kk.transpose()) / T(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(
      realify(ComplexPair<T>::imag(kk)), Eigen::EigenvaluesOnly);
  // Realified spectrum: ±ν_j, each twice. The top 2k values are ν_j, ν_j.
  VectorX<T> nu(k);
  for (Index j = 0; j < k; ++j) {
    const Index hi = 4 * k - 1 - 2 * j;
    nu(j) = (es.eigenvalues()(hi) + es.eigenvalues()(hi - 1)) / T(2);
  }
  return nu;
}

/// S V Sᵀ = diag(ν₁, ν₁, …, ν_k, ν_k) with S symplectic (mode-wise ordering).
template <typename T>
struct WilliamsonDecomposition {
  MatrixX<T> S;
  VectorX<T> nu;
};

/// Williamson normal form of a positive matrix in mode-wise ordering.
///
/// With A = V^{−1/2} Ω V^{−1/2}, the Hermitian matrix iA has eigenvalues ±1/ν.
/// Each positive eigenvector u = a + ib yields the orthonormal pair (b, a) on
/// which A acts as (1/ν)ω, so S = D^{1/2} Oᵀ V^{−1/2}. Eigenvectors from the
/// realified eigenproblem are grouped by eigenvalue and re-orthonormalised in
/// the complex inner product so that degenerate subspaces are not mixed.
template <typename Derived>
WilliamsonDecomposition<typename Derived::Scalar> williamson(
    const Eigen::MatrixBase<Derived>& v, const Tolerances& tol = {}) {
  using T = typename Derived::Scalar;
  using C = std::complex<T>;
  using CVec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  const Index d = v.rows();
  if (d % 2 != 0 || v.cols() != d)
    throw DomainError("williamson: dimension must be even");
  const Index k = d / 2;
  const MatrixX<T> vs = symmetrize(v);
  const T scale = spectral_norm(vs);
  SpectralInfo<T> info;
  const MatrixX<T> v_mhalf = sym_inv_sqrt(vs, T(0), &info);
  if (info.min_eigenvalue < T(tol.psd) * scale)
    throw ConditioningError(
        "williamson: matrix has eigenvalues below the positivity floor");

  MatrixX<T> a = v_mhalf * omega_modes<T>(int(k)) * v_mhalf;
  a = (a - a.transpose()) / T(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(
      realify(ComplexPair<T>::imag(a)));
  const VectorX<T>& lam = es.eigenvalues();
  const MatrixX<T>& vecs = es.eigenvectors();

  // Positive half of the realified spectrum, ascending: indices 2k … 4k−1.
  auto candidate = [&](Index idx) {
    CVec u(d);
    for (Index i = 0; i < d; ++i) u(i) = C(vecs(i, idx), vecs(d + i, idx));
    return u;
  };
  const T lam_max = lam(4 * k - 1);
  const T group_tol = T(1e-9) * lam_max;

  std::vector<CVec> chosen;
  chosen.reserve(k);
  auto residual = [&](CVec u) {
    for (const CVec& q : chosen) u -= q * q.dot(u);
    return u;
  };

  Index start = 2 * k;
  while (start < 4 * k) {
    Index end = start + 1;
    while (end < 4 * k && lam(end) - lam(end - 1) <= group_tol) ++end;
    if ((end - start) % 2 != 0 && end < 4 * k) ++end;
    const Index want = (end - start) / 2;
    std::vector<CVec> pool;
    for (Index idx = start; idx < end; ++idx) pool.push_back(candidate(idx));
    for (Index w = 0; w < want; ++w) {
      Index best = 0;
      T best_norm = T(-1);
      CVec best_vec;
      for (Index c = 0; c < Index(pool.size()); ++c) {
        CVec r = residual(pool[c]);
        const T nr = r.norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = c;
          best_vec = r;
        }
      }
      chosen.push_back(best_vec / best_norm);
      pool.erase(pool.begin() + best);
    }
    start = end;
  }

  // Global complex re-orthonormalisation (modified Gram–Schmidt).
  for (Index j = 0; j < Index(chosen.size()); ++j) {
    for (Index i = 0; i < j; ++i) chosen[j] -= chosen[i] * chosen[i].dot(chosen[j]);
    chosen[j].normalize();
  }

  MatrixX<T> o(d, d);
  VectorX<T> nu(k);
  const T sqrt2 = std::sqrt(T(2));
  for (Index j = 0; j < k; ++j) {
    o.col(2 * j) = sqrt2 * chosen[j].imag();
    o.col(2 * j + 1) = sqrt2 * chosen[j].real();
    const T l = o.col(2 * j).dot(a * o.col(2 * j + 1));
    nu(j) = T(1) / l;
  }

  // Stable sort of the pairs by ν, non-increasing.
  std::vector<Index> order(k);
  for (Index j = 0; j < k; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return nu(x) > nu(y); });
  MatrixX<T> o_sorted(d, d);
  VectorX<T> nu_sorted(k);
  for (Index j = 0; j < k; ++j) {
    o_sorted.col(2 * j) = o.col(2 * order[j]);
    o_sorted.col(2 * j + 1) = o.col(2 * order[j] + 1);
    nu_sorted(j) = nu(order[j]);
  }

  VectorX<T> dhalf(d);
  for (Index j = 0; j < k; ++j)
    dhalf(2 * j) = dhalf(2 * j + 1) = std::sqrt(nu_sorted(j));
  return {dhalf.asDiagonal() * o_sorted.transpose() * v_mhalf, nu_sorted};
}

/// Real symmetric 2(m+n)×2(m+n) covariance matrix with its mode layout.
///
/// Construction symmetrises the matrix and requires strict positivity; the
/// Heisenberg condition V + iΩ ⪰ 0 is checked separately by is_qcm().
class QCM {
 public:
  QCM(ModeLayout layout, Eigen::MatrixXd mat, const Tolerances& tol = {});

  /// Skips the positivity check (matrix is still symmetrised).
  static QCM trusted(ModeLayout layout, Eigen::MatrixXd mat);

  const ModeLayout& layout() const { return layout_; }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  Index dim() const { return mat_.rows(); }
  int m() const { return layout_.m; }
  int n() const { return layout_.n; }

  /// Blocks of [[V_A, X], [Xᵀ, V_B]] in mode-wise ordering.
  Eigen::MatrixXd va() const;
  Eigen::MatrixXd vb() const;
  Eigen::MatrixXd x() const;

  /// Same state in mode-wise ordering (a copy if already mode-wise).
  QCM modewise() const;

 private:
  QCM() = default;
  ModeLayout layout_;
  Eigen::MatrixXd mat_;
};

/// Congruence by the ordering permutation; round trips are bit-exact.
QCM reorder(const QCM& v, Ordering target);

struct QcmCheck {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of the Hermitian matrix V + iΩ
};

/// Heisenberg test: min eig(V + iΩ) ≥ −tol.psd·‖V‖. Rejects non-symmetric V.
QcmCheck is_qcm(const Eigen::MatrixXd& v, const ModeLayout& layout,
                const Tolerances& tol = {});
inline QcmCheck is_qcm(const QCM& v, const Tolerances& tol = {}) {
  return is_qcm(v.matrix(), v.layout(), tol);
}

Eigen::VectorXd symplectic_spectrum(const QCM& v, const Tolerances& tol = {});

/// Williamson form of the state; S acts on the mode-wise ordered matrix.
WilliamsonDecomposition<double> williamson(const QCM& v,
                                           const Tolerances& tol = {});

/// Θ_B: +1 on party A, ζ = diag(1, −1) on every mode of party B.
struct PartialTransposeMask {
  ModeLayout layout;
  Eigen::VectorXd theta;  // diagonal of Θ_B
};

PartialTransposeMask partial_transpose_mask(const ModeLayout& layout);

/// Momentum-sign flip on an arbitrary set of modes (indices into 0..m+n−1).
Eigen::VectorXd momentum_flip_signs(const ModeLayout& layout,
                                    const std::vector<int>& flipped_modes);

/// Θ_B V Θ_B; requires n ≥ 1.
QCM partial_transpose(const QCM& v);

/// Θ V Θ for an arbitrary diagonal sign vector.
QCM sign_congruence(const QCM& v, const Eigen::VectorXd& signs);

struct PptResult {
  bool ppt = false;
  bool distillable = false;  // set for every non-PPT verdict
  double min_symplectic_eigenvalue = 0.0;  // of the partial transpose
};

/// PPT iff the partial transpose has all symplectic eigenvalues ≥ 1 − tol.verdict.
PptResult is_ppt(const QCM& v, const Tolerances& tol = {});

/// PPT test across the cut that flips the given modes.
PptResult is_ppt_across(const QCM& v, const std::vector<int>& flipped_modes,
                        const Tolerances& tol = {});

/// Two-mode squeezing parameter with c = cosh 2r and s = sinh 2r.
struct TMSVParams {
  double r = 0.0;
  double c() const;
  double s() const;
};

/// [[cI, sζ], [sζ, cI]] as a 1-vs-1 mode-wise QCM.
QCM tmsv(double r);

/// ν·identity on m + n modes.
QCM thermal(double nu, int m, int n = 0);

struct Purity {
  bool pure = true;
  double nu_max = 1.0;
  static Purity Pure() { return {true, 1.0}; }
  static Purity Mixed(double nu_max) { return {false, nu_max}; }
};

/// S diag(ν⊗(1,1)) Sᵀ with S = K₁·Z·K₂: K passive (Haar), Z single-mode
/// squeezers with r ∈ [0, squeeze_max], ν ∈ [1, ν_max]. Deterministic in seed;
/// returned in the layout's ordering.
QCM random_qcm(std::uint64_t seed, ModeLayout layout, Purity purity,
               double squeeze_max);

/// Exchanges the roles of A and B (the B modes come first afterwards).
QCM swap_parties(const QCM& v);

/// Permutes whole modes of a mode-wise matrix: new mode i is old mode perm[i].
Eigen::MatrixXd permute_modes(const Eigen::MatrixXd& v,
                              const std::vector<int>& perm);

/// γ_A ⊕ γ_B as an m-vs-n state.
QCM product_state(const Eigen::MatrixXd& gamma_a,
                  const Eigen::MatrixXd& gamma_b);

/// Mode-wise direct sum of two bipartite states: A = A₁A₂, B = B₁B₂.
QCM bipartite_direct_sum(const QCM& first, const QCM& second);

}  // namespace gaussep
