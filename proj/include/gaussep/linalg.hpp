#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "gaussep/tolerances.hpp"

namespace gaussep {

using Eigen::Index;

template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// A complex matrix held as its real and imaginary parts.
///
/// Hermitian quantities (V + iΩ, V_B − iΩ_B and their inverses) live in this
/// form so that every eigenproblem can be posed on the real realification
/// [[Re, −Im], [Im, Re]], which is symmetric whenever the pair is Hermitian.
template <typename T>
struct ComplexPair {
  MatrixX<T> re;
  MatrixX<T> im;

  ComplexPair() = default;
  ComplexPair(MatrixX<T> real, MatrixX<T> imag)
      : re(std::move(real)), im(std::move(imag)) {}

  static ComplexPair real(const MatrixX<T>& m) {
    return {m, MatrixX<T>::Zero(m.rows(), m.cols())};
  }
  static ComplexPair imag(const MatrixX<T>& m) {
    return {MatrixX<T>::Zero(m.rows(), m.cols()), m};
  }

  Index rows() const { return re.rows(); }
  Index cols() const { return re.cols(); }

  ComplexPair adjoint() const { return {re.transpose(), -im.transpose()}; }
  ComplexPair conjugate() const { return {re, -im}; }
  ComplexPair transpose() const { return {re.transpose(), im.transpose()}; }

  ComplexPair block(Index r, Index c, Index nr, Index nc) const {
    return {re.block(r, c, nr, nc), im.block(r, c, nr, nc)};
  }

  /// Hermitian part (M + M†)/2.
  ComplexPair hermitian_part() const {
    return {(re + re.transpose()) / T(2), (im - im.transpose()) / T(2)};
  }

  ComplexPair operator+(const ComplexPair& o) const {
    return {re + o.re, im + o.im};
  }
  ComplexPair operator-(const ComplexPair& o) const {
    return {re - o.re, im - o.im};
  }
  ComplexPair operator*(const ComplexPair& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  ComplexPair operator*(T s) const { return {re * s, im * s}; }
  friend ComplexPair operator*(const MatrixX<T>& a, const ComplexPair& b) {
    return {a * b.re, a * b.im};
  }
  ComplexPair operator*(const MatrixX<T>& b) const {
    return {re * b, im * b};
  }
};

/// Real 2d×2d representation [[Re, −Im], [Im, Re]] of a d×d complex matrix.
/// It is an algebra homomorphism; Hermitian inputs map to symmetric outputs
/// whose spectrum is the input spectrum with every eigenvalue doubled.
template <typename T>
MatrixX<T> realify(const ComplexPair<T>& c) {
  const Index r = c.rows(), k = c.cols();
  MatrixX<T> out(2 * r, 2 * k);
  out.topLeftCorner(r, k) = c.re;
  out.topRightCorner(r, k) = -c.im;
  out.bottomLeftCorner(r, k) = c.im;
  out.bottomRightCorner(r, k) = c.re;
  return out;
}

/// Inverse of realify; averages the two redundant copies.
template <typename T>
ComplexPair<T> derealify(const MatrixX<T>& m) {
  const Index r = m.rows() / 2, k = m.cols() / 2;
  return {(m.topLeftCorner(r, k) + m.bottomRightCorner(r, k)) / T(2),
          (m.bottomLeftCorner(r, k) - m.topRightCorner(r, k)) / T(2)};
}

template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(
    const Eigen::MatrixBase<Derived>& m) {
  return (m + m.transpose()) / typename Derived::Scalar(2);
}

/// Largest singular value.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  if (m.size() == 0) return T(0);
  if (m.rows() == m.cols() && m.isApprox(m.transpose(), T(0))) {
    Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(m.eval(),
                                                 Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<MatrixX<T>> svd(m.eval());
  return svd.singularValues()(0);
}

template <typename T>
T spectral_norm(const ComplexPair<T>& c) {
  return spectral_norm(realify(c));
}

/// Smallest eigenvalue of a real symmetric matrix.
template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(symmetrize(m),
                                               Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Smallest eigenvalue of a Hermitian matrix, via its realification.
template <typename T>
T min_eigenvalue(const ComplexPair<T>& h) {
  return min_eigenvalue(realify(h.hermitian_part()));
}

/// Eigenvalues of a Hermitian matrix in ascending order (each once).
template <typename T>
VectorX<T> hermitian_eigenvalues(const ComplexPair<T>& h) {
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(realify(h.hermitian_part()),
                                               Eigen::EigenvaluesOnly);
  const Index d = h.rows();
  VectorX<T> out(d);
  for (Index i = 0; i < d; ++i) out(i) = es.eigenvalues()(2 * i);
  return out;
}

/// Records whether eigenvalue flooring was applied by a spectral function.
template <typename T>
struct SpectralInfo {
  bool floored = false;
  T min_eigenvalue = T(0);
};

/// f(A) for symmetric A through its eigendecomposition, with eigenvalues
/// below `floor` raised to `floor` first.
template <typename Derived, typename F>
MatrixX<typename Derived::Scalar> spectral_apply(
    const Eigen::MatrixBase<Derived>& a, F&& f,
    typename Derived::Scalar floor = 0,
    SpectralInfo<typename Derived::Scalar>* info = nullptr) {
  using T = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(symmetrize(a));
  VectorX<T> ev = es.eigenvalues();
  if (info) info->min_eigenvalue = ev.size() ? ev(0) : T(0);
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < floor) {
      ev(i) = floor;
      if (info) info->floored = true;
    }
    ev(i) = f(ev(i));
  }
  const MatrixX<T>& q = es.eigenvectors();
  return symmetrize(q * ev.asDiagonal() * q.transpose());
}

template <typename Derived>
MatrixX<typename Derived::Scalar> sym_sqrt(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar floor = 0,
    SpectralInfo<typename Derived::Scalar>* info = nullptr) {
  using std::sqrt;
  return spectral_apply(a, [](auto x) { return sqrt(x); }, floor, info);
}

template <typename Derived>
MatrixX<typename Derived::Scalar> sym_inv_sqrt(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar floor,
    SpectralInfo<typename Derived::Scalar>* info = nullptr) {
  using std::sqrt;
  return spectral_apply(a, [](auto x) { return 1 / sqrt(x); }, floor, info);
}

template <typename Derived>
MatrixX<typename Derived::Scalar> sym_inverse(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar floor,
    SpectralInfo<typename Derived::Scalar>* info = nullptr) {
  return spectral_apply(a, [](auto x) { return 1 / x; }, floor, info);
}

/// Positive part of a symmetric matrix (projection onto the PSD cone).
template <typename Derived>
MatrixX<typename Derived::Scalar> psd_part(
    const Eigen::MatrixBase<Derived>& a) {
  using T = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(symmetrize(a));
  VectorX<T> ev = es.eigenvalues().cwiseMax(T(0));
  const MatrixX<T>& q = es.eigenvectors();
  return symmetrize(q * ev.asDiagonal() * q.transpose());
}

/// Inverse of a complex matrix through its realification.
template <typename T>
ComplexPair<T> inverse(const ComplexPair<T>& c) {
  MatrixX<T> r = realify(c);
  Eigen::PartialPivLU<MatrixX<T>> lu(r);
  return derealify<T>(lu.inverse());
}

/// Block-diagonal assembly a ⊕ b.
template <typename DA, typename DB>
MatrixX<typename DA::Scalar> direct_sum(const Eigen::MatrixBase<DA>& a,
                                        const Eigen::MatrixBase<DB>& b) {
  using T = typename DA::Scalar;
  MatrixX<T> out = MatrixX<T>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace gaussep
