#pragma once

// Helpers shared by the unit, property and acceptance suites. The oracles
// here deliberately avoid the library's own spectral routines.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gaussep/passive.hpp"
#include "gaussep/symplectic.hpp"

namespace testsupport {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index r,
                                Eigen::Index c) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = g(rng);
  return m;
}

/// SPD with eigenvalues log-uniform in [lo, hi].
inline MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index d,
                           double lo = 0.1, double hi = 10.0) {
  Eigen::HouseholderQR<MatrixXd> qr(gaussian_matrix(rng, d, d));
  const MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  VectorXd ev(d);
  for (Eigen::Index i = 0; i < d; ++i) ev(i) = std::exp(u(rng));
  const MatrixXd out = q * ev.asDiagonal() * q.transpose();
  return (out + out.transpose()) / 2;
}

/// Symplectic (mode-wise) K₁·Z·K₂ built from explicit pieces.
inline MatrixXd random_symplectic(std::mt19937_64& rng, int k,
                                  double squeeze_max = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MatrixXd k1 =
      gaussep::passive_from_unitary(gaussep::haar_unitary(rng, k)).modewise();
  const MatrixXd k2 =
      gaussep::passive_from_unitary(gaussep::haar_unitary(rng, k)).modewise();
  VectorXd z(2 * k);
  for (int j = 0; j < k; ++j) {
    const double r = squeeze_max * (2 * u(rng) - 1);
    z(2 * j) = std::exp(-r);
    z(2 * j + 1) = std::exp(r);
  }
  return k1 * z.asDiagonal() * k2;
}

/// Symplectic eigenvalues from the non-symmetric eigenproblem of ΩV:
/// the moduli of the imaginary parts, each pair once, non-increasing.
inline VectorXd sympl_oracle(
    const MatrixXd& v,
    gaussep::Ordering ordering = gaussep::Ordering::ModeWise) {
  const int k = int(v.rows() / 2);
  const MatrixXd om = gaussep::omega_modes(k, ordering);
  Eigen::EigenSolver<MatrixXd> es(om * v, false);
  std::vector<double> vals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    vals.push_back(std::abs(es.eigenvalues()(i).imag()));
  std::sort(vals.begin(), vals.end(), std::greater<>());
  VectorXd out(k);
  for (int j = 0; j < k; ++j) out(j) = (vals[2 * j] + vals[2 * j + 1]) / 2;
  return out;
}

/// Smallest eigenvalue of V + iΩ from a complex Hermitian eigensolver.
inline double heisenberg_oracle(const MatrixXd& v) {
  const int k = int(v.rows() / 2);
  const Eigen::MatrixXcd h =
      v.cast<std::complex<double>>() +
      std::complex<double>(0, 1) * gaussep::omega_modes(k).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Average of V with its partial transpose; a PT-invariant state whenever
/// the average is a QCM. Draws fresh states from `seed` upwards until one is.
inline gaussep::QCM pt_invariant_state(std::uint64_t& seed, int m, int n,
                                       double nu_max = 3.0,
                                       double squeeze_max = 1.0) {
  for (;; ++seed) {
    const gaussep::QCM v = gaussep::random_qcm(
        seed, gaussep::ModeLayout{m, n}, gaussep::Purity::Mixed(nu_max),
        squeeze_max);
    const MatrixXd avg = (v.matrix() + gaussep::partial_transpose(v).matrix()) / 2;
    if (heisenberg_oracle(avg) > 1e-6) {
      ++seed;
      return gaussep::QCM(v.layout(), avg);
    }
  }
}

/// Mean of P_π V P_πᵀ over all permutations π of the A modes.
inline MatrixXd symmetrize_party_a(const MatrixXd& v, int m) {
  const int k = int(v.rows() / 2);
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  MatrixXd acc = MatrixXd::Zero(v.rows(), v.cols());
  int count = 0;
  do {
    acc += gaussep::permute_modes(v, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.begin() + m));
  return acc / count;
}

inline gaussep::QCM mono_symmetric_state(std::uint64_t seed, int m, int n,
                                         double nu_max = 2.0,
                                         double squeeze_max = 1.0) {
  const gaussep::QCM v = gaussep::random_qcm(
      seed, gaussep::ModeLayout{m, n}, gaussep::Purity::Mixed(nu_max), squeeze_max);
  return gaussep::QCM(v.layout(), symmetrize_party_a(v.matrix(), m));
}

/// tmsv(r) on the pairs (A_j, B_j) for j < pairs, vacua elsewhere, with the
/// A modes symmetrized. Entangled for r > 0.
inline gaussep::QCM symmetrized_tmsv(double r, int m, int n) {
  const MatrixXd t = gaussep::tmsv(r).matrix();
  MatrixXd v = MatrixXd::Identity(2 * (m + n), 2 * (m + n));
  const int pairs = std::min(m, n);
  for (int j = 0; j < pairs; ++j) {
    const int a = 2 * j, b = 2 * (m + j);
    v.block(a, a, 2, 2) = t.topLeftCorner(2, 2);
    v.block(b, b, 2, 2) = t.bottomRightCorner(2, 2);
    v.block(a, b, 2, 2) = t.topRightCorner(2, 2);
    v.block(b, a, 2, 2) = t.bottomLeftCorner(2, 2);
  }
  return gaussep::QCM(gaussep::ModeLayout{m, n}, symmetrize_party_a(v, m));
}

/// Two-by-two PPT entangled example, mode-wise (x1, p1, x2, p2 | x3, p3, x4, p4).
inline gaussep::QCM bound_entangled_2x2() {
  MatrixXd v(8, 8);
  v << 2, 0, 0, 0, 1, 0, 0, 0,
       0, 1, 0, 0, 0, 0, 0, -1,
       0, 0, 2, 0, 0, 0, -1, 0,
       0, 0, 0, 1, 0, -1, 0, 0,
       1, 0, 0, 0, 2, 0, 0, 0,
       0, 0, 0, -1, 0, 4, 0, 0,
       0, 0, -1, 0, 0, 0, 2, 0,
       0, -1, 0, 0, 0, 0, 0, 4;
  return gaussep::QCM(gaussep::ModeLayout{2, 2}, v);
}

inline double min_eig(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es((m + m.transpose()) / 2,
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace testsupport
