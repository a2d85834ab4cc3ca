#pragma once

// Separability of m-vs-n Gaussian states through the one-sided criterion
// iΩ_A ≤ γ_A ≤ V_A − X(V_B − iΩ_B)⁻¹Xᵀ, its exact 1-vs-n solution and the
// multipartite variant.

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gaussep/linalg.hpp"
#include "gaussep/symplectic.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

struct SolverConfig {
  int max_iterations = 5000;  // per level
  int bisection_depth = 40;   // number of levels tried
  Tolerances tol;
  /// Regularisation of the upper bound, relative to ‖V‖. Unset: try 0 and
  /// fall back to τ_psd·‖V‖·10^j, j = 0…3, when the block is singular.
  std::optional<double> epsilon;
};

enum class Verdict { Separable, Entangled, Inconclusive };

enum class Route {
  Trivial,        // one party has no modes
  PptWitness,     // partial transpose is not a QCM
  Interval,       // exact 1-vs-n construction
  General,        // primal feasibility search
  Dual,           // infeasibility certificate of the primal problem
  PtInvariant,
  MonoSymmetric,
  Isotropic,
};

const char* to_string(Verdict v);
const char* to_string(Route r);
Verdict verdict_from_string(const std::string& s);
Route route_from_string(const std::string& s);

/// Verdict with a self-contained witness.
///
/// `groups` lists the mode indices of each party; for bipartite states these
/// are A = {0…m−1} and B = {m…m+n−1}. Separable certificates carry one
/// mode-wise γ per group with V ≥ ⊕γ. Entangled certificates carry either the
/// cut whose partial transpose fails, or a dual pair (Y, Z) over the variable
/// groups (all groups except `fixed_group`).
struct SeparabilityCert {
  Verdict verdict = Verdict::Inconclusive;
  Route route = Route::General;
  std::vector<std::vector<int>> groups;
  std::vector<Eigen::MatrixXd> gammas;

  std::vector<int> witness_cut;  // modes whose momenta are flipped
  double min_pt_symplectic_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  bool distillable = false;

  double margin = std::numeric_limits<double>::quiet_NaN();
  double epsilon = 0.0;  // absolute regularisation used for the upper bound

  int fixed_group = -1;
  ComplexPair<double> dual_y, dual_z;
  double dual_bound = std::numeric_limits<double>::quiet_NaN();

  int iterations = 0;
  std::vector<std::string> notes;
};

/// Default A/B groups of a layout.
std::vector<std::vector<int>> bipartite_groups(const ModeLayout& layout);

/// V_A − X(V_B + εI + s·iΩ_B)⁻¹Xᵀ with s = ±1; the default s = −1 gives the
/// bound of the one-sided criterion, s = +1 its complex conjugate.
/// Throws ConditioningError if ε = 0 and the complex block is singular.
ComplexPair<double> upper_bound(const QCM& v, double eps = 0.0, int sign = -1,
                                const Tolerances& tol = {});

/// Upper bound over an arbitrary mode-wise matrix whose first `da` rows are
/// the variable part.
ComplexPair<double> upper_bound_split(const Eigen::MatrixXd& v, Index da,
                                      double eps, int sign,
                                      const Tolerances& tol = {});

struct MatrixInterval {
  ComplexPair<double> lower;  // M
  ComplexPair<double> upper;  // N
};

struct IntervalResult {
  bool feasible = false;
  Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
  double p = 0.0;
  double gap = 0.0;             // min eig(N − M)
  double gap_conjugate = 0.0;   // min eig(N* − M)
};

/// Real symmetric R with M ≤ R ≤ N for 2×2 Hermitian M, N.
IntervalResult interval_feasibility_2x2(const MatrixInterval& in,
                                        const Tolerances& tol = {});

SeparabilityCert separability_1vn(const QCM& v, const SolverConfig& cfg = {});

SeparabilityCert separability_general(const QCM& v,
                                      const SolverConfig& cfg = {});

/// Full separability across the given groups (k ≥ 2).
SeparabilityCert full_separability(const QCM& v,
                                   const std::vector<std::vector<int>>& groups,
                                   const SolverConfig& cfg = {});

/// Given γ's for every group but `fixed`, fills in the fixed group as the
/// ε-regularised Schur supremum and checks the result. Returns false when no
/// ε in the retry schedule yields a valid certificate.
bool complete_certificate(const QCM& v, SeparabilityCert& cert, int fixed,
                          const Tolerances& tol = {});

struct CertCheck {
  bool ok = false;
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  std::string reason;
};

/// Re-checks a certificate from V alone, without the solver.
CertCheck validate_certificate(const QCM& v, const SeparabilityCert& cert,
                               const Tolerances& tol = {});

/// ⊕γ placed at the modes of each group (mode-wise ordering).
Eigen::MatrixXd assemble_gammas(const std::vector<std::vector<int>>& groups,
                                const std::vector<Eigen::MatrixXd>& gammas,
                                int modes);

/// Certified upper bound on the optimal margin from a dual pair; the
/// primal is infeasible whenever this is negative.
double dual_certified_bound(const QCM& v, const SeparabilityCert& cert,
                            const Tolerances& tol = {});

}  // namespace gaussep
