#pragma once

// Passive (orthogonal-symplectic) transformations and absolute separability.

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "gaussep/symplectic.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

/// K = W†(U ⊕ U*)W for an n×n unitary U.
///
/// In position-momentum ordering this is [[Re U, −Im U], [Im U, Re U]].
struct PassiveTransform {
  Eigen::MatrixXcd unitary;
  Eigen::MatrixXd k_pm;

  int modes() const { return int(unitary.rows()); }
  /// K acting on mode-wise ordered vectors.
  Eigen::MatrixXd modewise() const;
};

/// Throws DomainError when ‖UU† − I‖_F > tol.alg.
PassiveTransform passive_from_unitary(const Eigen::MatrixXcd& u,
                                      const Tolerances& tol = {});

/// Haar-distributed n×n unitary: QR of a complex Gaussian matrix with the
/// phases of diag(R) moved into Q.
Eigen::MatrixXcd haar_unitary(std::mt19937_64& rng, int n);

PassiveTransform random_passive(std::uint64_t seed, int n);

/// KVKᵀ for a passive transform on all m + n modes.
QCM passive_congruence(const QCM& v, const PassiveTransform& k);

struct SymplecticVsOrdinary {
  double nu1_squared = 0.0;     // smallest symplectic eigenvalue, squared
  double lambda_product = 0.0;  // product of the two smallest eigenvalues
};

SymplecticVsOrdinary sympl_vs_ordinary_check(const Eigen::MatrixXd& a,
                                             const Tolerances& tol = {});

enum class AbsVerdict { AbsolutelySeparable, NotAbsolute };

const char* to_string(AbsVerdict v);

struct AbsSepCert {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  AbsVerdict verdict = AbsVerdict::NotAbsolute;

  // Present on absolutely separable states.
  bool has_witness = false;
  bool k_branch = false;  // λ₁ < 1, rank-one construction
  double k = 1.0;
  double p = 0.0;
  Eigen::VectorXd x, y, z;
  Eigen::MatrixXd gamma_a, gamma_b;

  double identity_residual = 0.0;  // ‖V_low − γ_A⊕γ_B − (1/k − k)wwᵀ‖_F
  double witness_min_eigenvalue = 0.0;  // of V − γ_A⊕γ_B
};

/// λ₁λ₂ ≥ 1 − tol.verdict decides. Witnesses are built for m, n ≥ 1.
AbsSepCert absolute_separability(const QCM& v, const Tolerances& tol = {});

/// Re-checks a certificate on V from its stored γ's and vectors.
bool validate_abs_cert(const QCM& v, const AbsSepCert& cert,
                       const Tolerances& tol = {});

struct OrbitReport {
  int trials = 0;
  AbsVerdict verdict = AbsVerdict::NotAbsolute;
  int ppt_violations = 0;   // only counted against absolutely separable V
  int cert_failures = 0;
  int verdict_changes = 0;
  double max_lambda_product_drift = 0.0;
  double min_pt_symplectic_eigenvalue = 0.0;
  int entangling_trial = -1;  // first trial with a non-PPT image, if any
};

OrbitReport passive_orbit_check(const QCM& v, int trials, std::uint64_t seed,
                                const Tolerances& tol = {});

}  // namespace gaussep
