#pragma once

// Fast paths for states with extra structure: invariance under partial
// transposition, permutation symmetry inside one party, and a fully
// degenerate symplectic spectrum.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "gaussep/separability.hpp"
#include "gaussep/symplectic.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

struct PtInvariance {
  bool invariant = false;
  double deviation = 0.0;  // max(‖X − XΘ_B‖, ‖V_B − Θ_B V_B Θ_B‖)
};

/// X = XΘ_B and V_B = Θ_B V_B Θ_B within tol.alg·‖V‖.
PtInvariance is_pt_invariant(const QCM& v, const Tolerances& tol = {});

/// Separable certificate for a PT-invariant state. The bound
/// V_A − X(V_B − iΩ_B)⁻¹Xᵀ is real here; its imaginary part is discarded and
/// its norm reported through `imaginary_residue`.
SeparabilityCert separability_pt_invariant(const QCM& v,
                                           const SolverConfig& cfg = {},
                                           double* imaginary_residue = nullptr);

/// Block template of a state invariant under mode exchanges within party A:
/// V_A has α on the diagonal and ε off it, X has κ_j in every row.
struct MonoSymmetricBlocks {
  Eigen::Matrix2d alpha = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d eps = Eigen::Matrix2d::Zero();
  std::vector<Eigen::MatrixXd> kappas;  // n blocks, 2×2 each
  bool detected = false;
  double deviation = 0.0;  // largest Frobenius distance of a block to its mean
};

/// Averages the blocks and reports whether every block is within
/// rel_tol·‖V‖ of its mean. Needs m ≥ 2; otherwise nothing is detected.
MonoSymmetricBlocks detect_mono_symmetry(const QCM& v, double rel_tol = 1e-8);

/// Mean of V over all permutations of the A modes; a mono-symmetric state.
/// Needs m ≤ 8.
QCM symmetrize_party_a(const QCM& v);

struct LocalizationResult {
  Eigen::MatrixXd s_a;                   // O ⊗ I₂ on party A (mode-wise)
  Eigen::MatrixXd o;                     // m×m Householder reflection
  std::optional<QCM> reduced;            // 1-vs-n: first A mode with B
  std::vector<Eigen::Matrix2d> spectators;  // remaining m − 1 A modes
  Eigen::MatrixXd transformed;           // (S_A ⊕ I) V (S_A ⊕ I)ᵀ
  double residual = 0.0;  // max |entry| of transformed − (spectators ⊕ reduced)
};

/// Householder O with O·(1,…,1)/√m = e₁; concentrates the correlations of a
/// mono-symmetric state onto the first A mode.
LocalizationResult localize(const QCM& v, const MonoSymmetricBlocks& blocks);

/// Decides a mono-symmetric state through its localized 1-vs-n core and
/// lifts the witness back. When party B is symmetric too, it is localized
/// as well.
SeparabilityCert separability_mono_symmetric(const QCM& v,
                                             const SolverConfig& cfg = {});

struct IsotropyCheck {
  bool isotropic = false;
  double nu = 0.0;         // mean symplectic eigenvalue
  double deviation = 0.0;  // max |ν_i − ν̄| / ν̄
};

IsotropyCheck is_isotropic(const QCM& v, double rel_tol = 1e-8);

struct IsotropicCert {
  double nu = 0.0;
  double g = 0.0;
  double purity_residual = 0.0;  // ‖gV − Ω(gV)⁻¹Ωᵀ‖_F / ‖gV‖
  Eigen::MatrixXd p, q;          // diagonal blocks of gV, position-momentum
  Eigen::MatrixXd gamma_a, gamma_b;  // mode-wise
};

/// For PPT isotropic states: γ_A = P#(ΩP⁻¹Ωᵀ), γ_B = Q#(ΩQ⁻¹Ωᵀ). Falls back
/// to the general engine, with a note, when gV fails the purity test.
SeparabilityCert separability_isotropic(const QCM& v,
                                        const SolverConfig& cfg = {},
                                        IsotropicCert* detail = nullptr);

/// Picks the first applicable path: PT-invariant, mono-symmetric, isotropic,
/// single-mode party, general. `engine` forces one of Route::General,
/// Route::Interval, Route::PtInvariant, Route::MonoSymmetric or
/// Route::Isotropic.
SeparabilityCert auto_separability(const QCM& v, const SolverConfig& cfg = {},
                                   std::optional<Route> engine = std::nullopt);

}  // namespace gaussep
