#pragma once

// Schur complements and the three elementary matrix means, plus the
// property utilities that exercise their variational characterisations.

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "gaussep/linalg.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

/// Split of a square matrix into [[A, X], [Y, B]] with A of size `split`.
struct BlockPartition {
  Index split = 1;

  void validate(Index dim) const {
    if (split < 1 || split >= dim)
      throw DomainError("block partition split " + std::to_string(split) +
                        " outside [1, " + std::to_string(dim) + ")");
  }
};

/// M/A = B − X†(A + εI)⁻¹X for Hermitian M.
///
/// With ε = 0 the A block must be invertible; otherwise a ConditioningError is
/// raised so the caller can retry with a positive ε.
template <typename T>
ComplexPair<T> schur_complement(const ComplexPair<T>& m, BlockPartition p,
                                T eps = T(0), const Tolerances& tol = {}) {
  p.validate(m.rows());
  const Index da = p.split, db = m.rows() - p.split;
  ComplexPair<T> a = m.block(0, 0, da, da);
  const ComplexPair<T> x = m.block(0, da, da, db);
  const ComplexPair<T> b = m.block(da, da, db, db);
  a.re += eps * MatrixX<T>::Identity(da, da);
  if (eps == T(0)) {
    const T scale = std::max(spectral_norm(m), T(1e-300));
    const VectorX<T> ev = hermitian_eigenvalues(a);
    if (ev.cwiseAbs().minCoeff() < T(tol.psd) * scale)
      throw ConditioningError(
          "Schur complement: leading block is singular; retry with eps > 0");
  }
  return (b - x.adjoint() * inverse(a) * x).hermitian_part();
}

/// Real symmetric overload; returns B − Xᵀ(A + εI)⁻¹X.
template <typename Derived>
MatrixX<typename Derived::Scalar> schur_complement(
    const Eigen::MatrixBase<Derived>& m, BlockPartition p,
    typename Derived::Scalar eps = 0, const Tolerances& tol = {}) {
  using T = typename Derived::Scalar;
  return schur_complement(ComplexPair<T>::real(m.eval()), p, eps, tol).re;
}

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive definite";
    case Definiteness::PositiveSemidefinite: return "positive semidefinite";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "?";
}

/// Classification from the spectrum directly; the band is tol.psd·‖H‖.
template <typename T>
Definiteness classify_by_eigenvalues(const ComplexPair<T>& h,
                                     const Tolerances& tol = {}) {
  const T thr = T(tol.psd) * spectral_norm(h);
  const T lmin = min_eigenvalue(h);
  if (lmin > thr) return Definiteness::PositiveDefinite;
  if (lmin >= -thr) return Definiteness::PositiveSemidefinite;
  return Definiteness::Indefinite;
}

struct SchurPositivity {
  Definiteness verdict;  // from the block criterion
  Definiteness direct;   // from the full spectrum
  bool consistent() const { return verdict == direct; }
};

/// Positivity of a Hermitian block matrix through its leading block and the
/// Schur complement; the semidefinite case uses the ε-regularised complement
/// at ε = tol.psd·‖H‖.
template <typename T>
SchurPositivity positivity_via_schur(const ComplexPair<T>& h,
                                     BlockPartition p,
                                     const Tolerances& tol = {}) {
  p.validate(h.rows());
  const ComplexPair<T> hh = h.hermitian_part();
  const T thr = T(tol.psd) * spectral_norm(hh);
  const Index da = p.split;
  const T amin = min_eigenvalue(hh.block(0, 0, da, da));

  Definiteness verdict;
  if (amin < -thr) {
    verdict = Definiteness::Indefinite;
  } else if (amin > thr) {
    const T smin = min_eigenvalue(schur_complement(hh, p, T(0), tol));
    verdict = smin > thr    ? Definiteness::PositiveDefinite
              : smin >= -thr ? Definiteness::PositiveSemidefinite
                             : Definiteness::Indefinite;
  } else {
    const T eps = std::max(thr, T(1e-300));
    const T smin = min_eigenvalue(schur_complement(hh, p, eps, tol));
    verdict = smin >= -thr ? Definiteness::PositiveSemidefinite
                           : Definiteness::Indefinite;
  }
  return {verdict, classify_by_eigenvalues(hh, tol)};
}

template <typename Derived>
SchurPositivity positivity_via_schur(const Eigen::MatrixBase<Derived>& h,
                                     BlockPartition p,
                                     const Tolerances& tol = {}) {
  using T = typename Derived::Scalar;
  return positivity_via_schur(ComplexPair<T>::real(h.eval()), p, tol);
}

/// Property check of the supremum characterisation of H/A: every
/// B̃ ≤ H/A − δ keeps H − 0⊕B̃ strictly positive, while B̃ = H/A + δP with
/// P ⪰ 0, P ≠ 0 breaks positivity. Returns true when all trials agree.
template <typename Derived>
bool schur_is_supremum_check(const Eigen::MatrixBase<Derived>& h,
                             BlockPartition p, int trials,
                             std::uint64_t seed = 1,
                             typename Derived::Scalar delta = 1e-3) {
  using T = typename Derived::Scalar;
  p.validate(h.rows());
  const MatrixX<T> hh = symmetrize(h);
  const Index da = p.split, db = hh.rows() - da;
  if (min_eigenvalue(hh.topLeftCorner(da, da)) <= T(0))
    throw DomainError("schur_is_supremum_check: leading block not positive");
  const MatrixX<T> s = schur_complement(hh, p);
  const T d = delta * std::max(spectral_norm(hh), T(1));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_psd = [&]() {
    MatrixX<T> g(db, db);
    for (Index i = 0; i < g.size(); ++i) g(i) = T(gauss(rng));
    MatrixX<T> q = g * g.transpose();
    return MatrixX<T>(q / std::max(spectral_norm(q), T(1e-12)));
  };
  auto embed = [&](const MatrixX<T>& b) {
    MatrixX<T> out = MatrixX<T>::Zero(hh.rows(), hh.cols());
    out.bottomRightCorner(db, db) = b;
    return out;
  };

  for (int t = 0; t < trials; ++t) {
    const MatrixX<T> below =
        s - d * MatrixX<T>::Identity(db, db) - d * random_psd();
    if (!(min_eigenvalue(MatrixX<T>(hh - embed(below))) > T(0))) return false;
    const MatrixX<T> above = s + d * random_psd();
    if (min_eigenvalue(MatrixX<T>(hh - embed(above))) >= T(0)) return false;
  }
  return true;
}

/// Reported by the means when an input had to be floored before inversion.
template <typename T>
struct MeanInfo {
  bool floored = false;
};

namespace internal {

template <typename T>
void check_positive(const MatrixX<T>& a, const Tolerances& tol,
                    const char* what) {
  const T lmin = min_eigenvalue(a);
  if (lmin < -T(tol.psd) * spectral_norm(a))
    throw DomainError(std::string(what) + ": input is not positive");
}

template <typename T>
T floor_for(const MatrixX<T>& a, const Tolerances& tol) {
  return std::max(T(tol.psd) * spectral_norm(a),
                  std::numeric_limits<T>::min());
}

}  // namespace internal

template <typename DA, typename DB>
MatrixX<typename DA::Scalar> arithmetic_mean(const Eigen::MatrixBase<DA>& a,
                                             const Eigen::MatrixBase<DB>& b) {
  using T = typename DA::Scalar;
  return symmetrize(MatrixX<T>((a + b) / T(2)));
}

/// A!B = ((A⁻¹ + B⁻¹)/2)⁻¹.
template <typename DA, typename DB>
MatrixX<typename DA::Scalar> harmonic_mean(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
    const Tolerances& tol = {}, MeanInfo<typename DA::Scalar>* info = nullptr) {
  using T = typename DA::Scalar;
  const MatrixX<T> aa = symmetrize(a), bb = symmetrize(b);
  internal::check_positive(aa, tol, "harmonic_mean");
  internal::check_positive(bb, tol, "harmonic_mean");
  SpectralInfo<T> ia, ib, ic;
  const MatrixX<T> sum = (sym_inverse(aa, internal::floor_for(aa, tol), &ia) +
                          sym_inverse(bb, internal::floor_for(bb, tol), &ib)) /
                         T(2);
  MatrixX<T> out = sym_inverse(sum, internal::floor_for(sum, tol), &ic);
  if (info) info->floored = ia.floored || ib.floored || ic.floored;
  return out;
}

/// A#B = A^{1/2}(A^{−1/2} B A^{−1/2})^{1/2} A^{1/2}.
template <typename DA, typename DB>
MatrixX<typename DA::Scalar> geometric_mean(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
    const Tolerances& tol = {}, MeanInfo<typename DA::Scalar>* info = nullptr) {
  using T = typename DA::Scalar;
  const MatrixX<T> aa = symmetrize(a), bb = symmetrize(b);
  internal::check_positive(aa, tol, "geometric_mean");
  internal::check_positive(bb, tol, "geometric_mean");
  SpectralInfo<T> i1, i2;
  const T fa = internal::floor_for(aa, tol);
  const MatrixX<T> a_half = sym_sqrt(aa, fa, &i1);
  const MatrixX<T> a_mhalf = sym_inv_sqrt(aa, fa, &i2);
  const MatrixX<T> inner = symmetrize(MatrixX<T>(a_mhalf * bb * a_mhalf));
  SpectralInfo<T> i3;
  const MatrixX<T> root = sym_sqrt(inner, internal::floor_for(inner, tol), &i3);
  if (info) info->floored = i1.floored || i2.floored || i3.floored;
  return symmetrize(MatrixX<T>(a_half * root * a_half));
}

/// ‖A#B − ((A+B)/2)#(A!B)‖_F.
template <typename DA, typename DB>
typename DA::Scalar mean_identity_residual(const Eigen::MatrixBase<DA>& a,
                                           const Eigen::MatrixBase<DB>& b,
                                           const Tolerances& tol = {}) {
  using T = typename DA::Scalar;
  const MatrixX<T> g = geometric_mean(a, b, tol);
  const MatrixX<T> am = arithmetic_mean(a, b);
  const MatrixX<T> hm = harmonic_mean(a, b, tol);
  return (g - geometric_mean(am, hm, tol)).norm();
}

}  // namespace gaussep
