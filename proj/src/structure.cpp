#include "gaussep/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gaussep/matrix_analysis.hpp"

namespace gaussep {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

bool trivial_layout(const QCM& v) { return v.m() == 0 || v.n() == 0; }

void require_qcm(const QCM& v, const Tolerances& tol) {
  if (!is_qcm(v, tol).valid)
    throw DomainError("separability: input is not a valid QCM");
}

// V_A − X(V_B + εI − iΩ_B)⁻¹Xᵀ with the usual ε schedule.
ComplexPair<double> bound_with_schedule(const QCM& v, const SolverConfig& cfg,
                                        double* eps_used) {
  const double scale = spectral_norm(v.matrix());
  if (cfg.epsilon) {
    *eps_used = *cfg.epsilon * scale;
    return upper_bound(v, *eps_used, -1, cfg.tol);
  }
  try {
    *eps_used = 0.0;
    return upper_bound(v, 0.0, -1, cfg.tol);
  } catch (const ConditioningError&) {
  }
  for (int j = 0;; ++j) {
    *eps_used = cfg.tol.psd * scale * std::pow(10.0, j);
    try {
      return upper_bound(v, *eps_used, -1, cfg.tol);
    } catch (const ConditioningError&) {
      if (j == 3) throw;
    }
  }
}

// Fills the PPT witness fields on the original state.
void entangled_by_ppt(const QCM& v, SeparabilityCert& c, Route route,
                      const Tolerances& tol) {
  const PptResult r = is_ppt(v, tol);
  c.verdict = Verdict::Entangled;
  c.route = route;
  c.distillable = true;
  c.witness_cut = c.groups[1];
  c.min_pt_symplectic_eigenvalue = r.min_symplectic_eigenvalue;
  c.margin = r.min_symplectic_eigenvalue - 1.0;
  c.gammas.clear();
}

// Keeps γ_A and recomputes γ_B when the lifted pair misses validation by
// rounding.
void finish_separable(const QCM& v, SeparabilityCert& c, const Tolerances& tol) {
  c.verdict = Verdict::Separable;
  if (validate_certificate(v, c, tol).ok) return;
  if (complete_certificate(v, c, 1, tol)) return;
  c.verdict = Verdict::Inconclusive;
  c.gammas.clear();
  c.notes.push_back("witness did not validate on the original state");
}

// Party-A block of a mode-wise matrix in position-momentum ordering.
MatrixXd to_pm(const MatrixXd& mw) {
  const auto p = modewise_to_pm(int(mw.rows() / 2));
  return p * mw * p.transpose();
}

MatrixXd from_pm(const MatrixXd& pm) {
  const auto p = modewise_to_pm(int(pm.rows() / 2));
  return p.transpose() * pm * p;
}

// P#(ΩP⁻¹Ωᵀ) in position-momentum ordering.
MatrixXd pure_mean(const MatrixXd& p_pm, const Tolerances& tol) {
  const MatrixXd om = omega_modes(int(p_pm.rows() / 2), Ordering::PositionMomentum);
  const MatrixXd pinv = p_pm.ldlt().solve(MatrixXd::Identity(p_pm.rows(), p_pm.cols()));
  return geometric_mean(p_pm, symmetrize(MatrixXd(om * pinv * om.transpose())), tol);
}

MatrixXd blockdiag(const Matrix2d& first, const std::vector<Matrix2d>& rest) {
  const Index k = 1 + Index(rest.size());
  MatrixXd out = MatrixXd::Zero(2 * k, 2 * k);
  out.topLeftCorner(2, 2) = first;
  for (Index j = 1; j < k; ++j) out.block(2 * j, 2 * j, 2, 2) = rest[j - 1];
  return out;
}

}  // namespace

PtInvariance is_pt_invariant(const QCM& v, const Tolerances& tol) {
  PtInvariance out;
  if (trivial_layout(v)) {
    out.invariant = true;
    return out;
  }
  const QCM mw = v.modewise();
  const VectorXd zeta = partial_transpose_mask(mw.layout())
                            .theta.tail(2 * Index(v.n()));
  const MatrixXd x = mw.x(), vb = mw.vb();
  const double dx = (x - x * zeta.asDiagonal()).norm();
  const double db =
      (vb - zeta.asDiagonal() * vb * zeta.asDiagonal()).norm();
  out.deviation = std::max(dx, db);
  out.invariant = out.deviation <= tol.alg * spectral_norm(mw.matrix());
  return out;
}

SeparabilityCert separability_pt_invariant(const QCM& v, const SolverConfig& cfg,
                                           double* imaginary_residue) {
  const Tolerances& tol = cfg.tol;
  require_qcm(v, tol);
  if (imaginary_residue) *imaginary_residue = 0.0;
  if (trivial_layout(v)) return separability_general(v, cfg);
  const PtInvariance pt = is_pt_invariant(v, tol);
  if (!pt.invariant)
    throw DomainError("separability_pt_invariant: state is not PT-invariant (deviation " +
                      std::to_string(pt.deviation) + ")");

  SeparabilityCert c;
  c.groups = bipartite_groups(v.layout());
  c.route = Route::PtInvariant;
  c.fixed_group = 1;
  const ComplexPair<double> n = bound_with_schedule(v.modewise(), cfg, &c.epsilon);
  if (imaginary_residue) *imaginary_residue = n.im.norm();
  c.gammas = {symmetrize(n.re), MatrixXd()};
  c.margin = min_eigenvalue(ComplexPair<double>(c.gammas[0], -omega_modes(v.m())));
  c.verdict = Verdict::Separable;
  if (complete_certificate(v, c, 1, tol)) return c;
  c.verdict = Verdict::Inconclusive;
  c.gammas.clear();
  c.notes.push_back("PT-invariant witness did not validate");
  return c;
}

MonoSymmetricBlocks detect_mono_symmetry(const QCM& v, double rel_tol) {
  MonoSymmetricBlocks out;
  const int m = v.m(), n = v.n();
  if (m < 2) return out;
  const MatrixXd w = v.modewise().matrix();
  auto blk = [&](int i, int j) { return Matrix2d(w.block(2 * i, 2 * j, 2, 2)); };

  for (int i = 0; i < m; ++i) out.alpha += blk(i, i);
  out.alpha /= m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) out.eps += blk(i, j);
  out.eps /= double(m) * (m - 1);
  for (int j = 0; j < n; ++j) {
    Matrix2d k = Matrix2d::Zero();
    for (int i = 0; i < m; ++i) k += blk(i, m + j);
    out.kappas.push_back(k / m);
  }

  double dev = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      dev = std::max(dev, (blk(i, j) - (i == j ? out.alpha : out.eps)).norm());
    for (int j = 0; j < n; ++j)
      dev = std::max(dev, (blk(i, m + j) - out.kappas[j]).norm());
  }
  out.deviation = dev;
  out.detected = dev <= rel_tol * spectral_norm(w);
  return out;
}

QCM symmetrize_party_a(const QCM& v) {
  const int m = v.m(), k = v.layout().modes();
  if (m > 8) throw DomainError("symmetrize_party_a: at most 8 A modes");
  const QCM mw = v.modewise();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  MatrixXd acc = MatrixXd::Zero(mw.dim(), mw.dim());
  int count = 0;
  do {
    acc += permute_modes(mw.matrix(), perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.begin() + m));
  return QCM(mw.layout(), acc / count);
}

LocalizationResult localize(const QCM& v, const MonoSymmetricBlocks& blocks) {
  if (!blocks.detected)
    throw DomainError("localize: state is not mono-symmetric");
  const int m = v.m(), n = v.n();
  if (m < 1) throw DomainError("localize: party A has no modes");
  LocalizationResult r;

  // Householder reflection taking |+⟩ to |1⟩.
  VectorXd w = VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
  w(0) -= 1.0;
  r.o = MatrixXd::Identity(m, m);
  if (w.squaredNorm() > 0) r.o -= 2.0 * w * w.transpose() / w.squaredNorm();
  r.s_a = MatrixXd::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      r.s_a.block(2 * i, 2 * j, 2, 2) = r.o(i, j) * Matrix2d::Identity();

  const MatrixXd full_s = direct_sum(r.s_a, MatrixXd::Identity(2 * n, 2 * n));
  r.transformed = symmetrize(MatrixXd(full_s * v.modewise().matrix() * full_s.transpose()));

  std::vector<Index> keep = {0, 1};
  for (Index j = 2 * m; j < r.transformed.rows(); ++j) keep.push_back(j);
  MatrixXd red(keep.size(), keep.size());
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      red(i, j) = r.transformed(keep[i], keep[j]);
  r.reduced.emplace(QCM::trusted(ModeLayout{1, n}, red));

  MatrixXd assembled = MatrixXd::Zero(r.transformed.rows(), r.transformed.cols());
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      assembled(keep[i], keep[j]) = red(i, j);
  for (int i = 1; i < m; ++i) {
    r.spectators.push_back(r.transformed.block(2 * i, 2 * i, 2, 2));
    assembled.block(2 * i, 2 * i, 2, 2) = r.spectators.back();
  }
  r.residual = (r.transformed - assembled).cwiseAbs().maxCoeff();
  return r;
}

SeparabilityCert separability_mono_symmetric(const QCM& v, const SolverConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  require_qcm(v, tol);
  if (trivial_layout(v)) return separability_general(v, cfg);
  const MonoSymmetricBlocks ba = detect_mono_symmetry(v, tol.alg);

  if (!ba.detected) {
    // Symmetric on the B side only: decide the swapped state.
    const QCM sw = swap_parties(v);
    if (!detect_mono_symmetry(sw, tol.alg).detected)
      throw DomainError("separability_mono_symmetric: no party is mono-symmetric");
    const SeparabilityCert s = separability_mono_symmetric(sw, cfg);
    SeparabilityCert c;
    c.groups = bipartite_groups(v.layout());
    c.route = Route::MonoSymmetric;
    c.notes = s.notes;
    c.iterations = s.iterations;
    c.margin = s.margin;
    if (s.verdict == Verdict::Entangled) {
      entangled_by_ppt(v, c, Route::MonoSymmetric, tol);
    } else if (s.verdict == Verdict::Separable) {
      c.gammas = {s.gammas[1], s.gammas[0]};
      finish_separable(v, c, tol);
    }
    return c;
  }

  SeparabilityCert c;
  c.groups = bipartite_groups(v.layout());
  c.route = Route::MonoSymmetric;
  c.fixed_group = 1;
  const PptResult ppt = is_ppt(v, tol);
  c.min_pt_symplectic_eigenvalue = ppt.min_symplectic_eigenvalue;
  if (!ppt.ppt) {
    entangled_by_ppt(v, c, Route::MonoSymmetric, tol);
    return c;
  }

  const LocalizationResult la = localize(v, ba);
  QCM core = *la.reduced;
  std::optional<LocalizationResult> lb;
  if (v.n() >= 2) {
    const QCM sw = swap_parties(core);
    const MonoSymmetricBlocks bb = detect_mono_symmetry(sw, tol.alg);
    if (bb.detected) {
      lb = localize(sw, bb);
      core = swap_parties(*lb->reduced);
      c.notes.push_back("bi-symmetric: both parties localized");
    }
  }

  const SeparabilityCert inner = separability_1vn(core, cfg);
  c.iterations = inner.iterations;
  c.margin = inner.margin;
  c.epsilon = inner.epsilon;
  if (inner.verdict != Verdict::Separable) {
    c.verdict = Verdict::Inconclusive;
    c.notes.push_back(std::string("localized core: ") + to_string(inner.verdict));
    return c;
  }

  const MatrixXd ga_loc = blockdiag(inner.gammas[0], la.spectators);
  MatrixXd gb = inner.gammas[1];
  if (lb) {
    const MatrixXd gb_loc = blockdiag(inner.gammas[1], lb->spectators);
    gb = symmetrize(MatrixXd(lb->s_a.transpose() * gb_loc * lb->s_a));
  }
  c.gammas = {symmetrize(MatrixXd(la.s_a.transpose() * ga_loc * la.s_a)), gb};
  finish_separable(v, c, tol);
  return c;
}

IsotropyCheck is_isotropic(const QCM& v, double rel_tol) {
  IsotropyCheck out;
  const VectorXd nu = symplectic_spectrum(v);
  out.nu = nu.mean();
  out.deviation = (nu.array() - out.nu).abs().maxCoeff() / out.nu;
  out.isotropic = out.deviation <= rel_tol;
  return out;
}

SeparabilityCert separability_isotropic(const QCM& v, const SolverConfig& cfg,
                                        IsotropicCert* detail) {
  const Tolerances& tol = cfg.tol;
  require_qcm(v, tol);
  if (trivial_layout(v)) return separability_general(v, cfg);
  const IsotropyCheck iso = is_isotropic(v, tol.alg);
  if (!iso.isotropic)
    throw DomainError("separability_isotropic: symplectic spectrum is not degenerate");

  SeparabilityCert c;
  c.groups = bipartite_groups(v.layout());
  c.route = Route::Isotropic;
  const PptResult ppt = is_ppt(v, tol);
  c.min_pt_symplectic_eigenvalue = ppt.min_symplectic_eigenvalue;
  if (!ppt.ppt) {
    entangled_by_ppt(v, c, Route::Isotropic, tol);
    return c;
  }

  IsotropicCert d;
  d.nu = iso.nu;
  d.g = 1.0 / iso.nu;
  const QCM mw = v.modewise();
  const MatrixXd w = d.g * mw.matrix();
  const MatrixXd om = omega_modes(v.layout().modes());
  const MatrixXd winv = w.ldlt().solve(MatrixXd::Identity(w.rows(), w.cols()));
  d.purity_residual = (w - om * winv * om.transpose()).norm() / w.norm();
  if (d.purity_residual > tol.alg) {
    SeparabilityCert g = separability_general(v, cfg);
    g.notes.push_back("isotropic purity test failed; used the general engine");
    if (detail) *detail = d;
    return g;
  }

  const Index da = 2 * Index(v.m());
  d.p = to_pm(w.topLeftCorner(da, da));
  d.q = to_pm(w.bottomRightCorner(w.rows() - da, w.rows() - da));
  d.gamma_a = from_pm(pure_mean(d.p, tol));
  d.gamma_b = from_pm(pure_mean(d.q, tol));
  c.gammas = {d.gamma_a, d.gamma_b};
  c.margin = ppt.min_symplectic_eigenvalue - 1.0;
  if (detail) *detail = d;
  finish_separable(v, c, tol);
  return c;
}

SeparabilityCert auto_separability(const QCM& v, const SolverConfig& cfg,
                                   std::optional<Route> engine) {
  const Tolerances& tol = cfg.tol;
  require_qcm(v, tol);
  if (engine) {
    switch (*engine) {
      case Route::General: return separability_general(v, cfg);
      case Route::Interval: return separability_1vn(v, cfg);
      case Route::PtInvariant: return separability_pt_invariant(v, cfg);
      case Route::MonoSymmetric: return separability_mono_symmetric(v, cfg);
      case Route::Isotropic: return separability_isotropic(v, cfg);
      default:
        throw DomainError(std::string("engine '") + to_string(*engine) +
                          "' cannot be forced");
    }
  }
  if (trivial_layout(v)) return separability_general(v, cfg);
  if (is_pt_invariant(v, tol).invariant) return separability_pt_invariant(v, cfg);
  if (detect_mono_symmetry(v, tol.alg).detected ||
      detect_mono_symmetry(swap_parties(v), tol.alg).detected)
    return separability_mono_symmetric(v, cfg);
  if (is_isotropic(v, tol.alg).isotropic) return separability_isotropic(v, cfg);
  if (v.m() == 1 || v.n() == 1) return separability_1vn(v, cfg);
  return separability_general(v, cfg);
}

}  // namespace gaussep
