#include "gaussep/separability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaussep/matrix_analysis.hpp"

namespace gaussep {

namespace {

using Eigen::MatrixXd;

constexpr const char* kVerdictNames[] = {"separable", "entangled",
                                         "inconclusive"};
constexpr const char* kRouteNames[] = {
    "trivial", "ppt-witness", "interval", "general",
    "dual",    "pt-invariant", "mono-symmetric", "isotropic"};

double frob_dot(const ComplexPair<double>& a, const ComplexPair<double>& b) {
  return a.re.cwiseProduct(b.re).sum() + a.im.cwiseProduct(b.im).sum();
}

ComplexPair<double> hermitian_psd(const ComplexPair<double>& h) {
  return derealify<double>(psd_part(realify(h.hermitian_part())));
}

void check_groups(const std::vector<std::vector<int>>& groups, int modes,
                  bool allow_empty = false) {
  std::vector<int> seen(modes, 0);
  for (const auto& g : groups) {
    if (g.empty() && !allow_empty) throw DomainError("groups: empty group");
    for (int i : g) {
      if (i < 0 || i >= modes) throw DomainError("groups: mode out of range");
      if (seen[i]++) throw DomainError("groups: mode listed twice");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw DomainError("groups: some modes are not assigned");
}

/// Variable groups in order, then the fixed group.
std::vector<int> engine_order(const std::vector<std::vector<int>>& groups,
                              int fixed) {
  std::vector<int> perm;
  for (int g = 0; g < int(groups.size()); ++g)
    if (g != fixed) perm.insert(perm.end(), groups[g].begin(), groups[g].end());
  perm.insert(perm.end(), groups[fixed].begin(), groups[fixed].end());
  return perm;
}

/// Real dimensions of the variable blocks, in engine order.
std::vector<Index> variable_blocks(const std::vector<std::vector<int>>& groups,
                                   int fixed) {
  std::vector<Index> dims;
  for (int g = 0; g < int(groups.size()); ++g)
    if (g != fixed) dims.push_back(2 * Index(groups[g].size()));
  return dims;
}

MatrixXd zero_cross_blocks(MatrixXd s, const std::vector<Index>& blocks) {
  Index r0 = 0;
  for (Index bi = 0; bi < Index(blocks.size()); ++bi) {
    Index c0 = 0;
    for (Index bj = 0; bj < Index(blocks.size()); ++bj) {
      if (bi != bj) s.block(r0, c0, blocks[bi], blocks[bj]).setZero();
      c0 += blocks[bj];
    }
    r0 += blocks[bi];
  }
  return s;
}

/// Upper bound for the engine ordering, with the ε retry schedule.
ComplexPair<double> bound_with_retry(const MatrixXd& vp, Index da,
                                     const SolverConfig& cfg, double scale,
                                     double* eps_used) {
  if (cfg.epsilon) {
    *eps_used = *cfg.epsilon * scale;
    return upper_bound_split(vp, da, *eps_used, -1, cfg.tol);
  }
  try {
    *eps_used = 0.0;
    return upper_bound_split(vp, da, 0.0, -1, cfg.tol);
  } catch (const ConditioningError&) {
  }
  double eps = cfg.tol.psd * scale;
  for (int j = 0;; ++j, eps *= 10) {
    try {
      *eps_used = eps;
      return upper_bound_split(vp, da, eps, -1, cfg.tol);
    } catch (const ConditioningError&) {
      if (j >= 3) throw;
    }
  }
}

/// max t s.t. γ − iΩ ⪰ tI, N − γ ⪰ tI over real block-diagonal γ.
class IntervalEngine {
 public:
  IntervalEngine(ComplexPair<double> n, std::vector<Index> blocks,
                 const SolverConfig& cfg, double scale)
      : n_(std::move(n)), blocks_(std::move(blocks)), cfg_(cfg),
        scale_(scale) {
    d_ = n_.rows();
    om_ = omega_modes(int(d_ / 2));
    nr_ = realify(n_);
    lr_ = realify(ComplexPair<double>::imag(om_));
  }

  struct Result {
    bool found = false;
    MatrixXd gamma;
    double t = -std::numeric_limits<double>::infinity();
    double t_upper = 0.0;
    int iterations = 0;
  };

  double t_value(const MatrixXd& s) const {
    const MatrixXd sr = realify(ComplexPair<double>::real(s));
    return std::min(min_eigenvalue(MatrixXd(sr - lr_)),
                    min_eigenvalue(MatrixXd(nr_ - sr)));
  }

  MatrixXd project_sub(const MatrixXd& xr) const {
    const MatrixXd avg =
        (xr.topLeftCorner(d_, d_) + xr.bottomRightCorner(d_, d_)) / 2;
    return zero_cross_blocks(symmetrize(avg), blocks_);
  }

  Result solve() {
    Result res;
    const double tv_band = cfg_.tol.verdict * scale_;
    res.t_upper =
        0.5 * std::min(min_eigenvalue(MatrixXd(nr_ - lr_)),
                       min_eigenvalue(MatrixXd(realify(n_.conjugate()) - lr_)));

    // Candidates: Re N and its midpoint with a pure QCM below it.
    MatrixXd best = project_sub(nr_);
    double best_t = t_value(best);
    try {
      const MatrixXd ren = best;
      if (min_eigenvalue(ren) > cfg_.tol.psd * scale_) {
        const MatrixXd inv = sym_inverse(ren, 0.0);
        const MatrixXd pure =
            geometric_mean(ren, MatrixXd(om_ * inv * om_.transpose()), cfg_.tol);
        const MatrixXd mid = project_sub(realify(
            ComplexPair<double>::real(MatrixXd((ren + pure) / 2))));
        const double tm = t_value(mid);
        if (tm > best_t) {
          best = mid;
          best_t = tm;
        }
      }
    } catch (const DomainError&) {
    }

    if (res.t_upper >= -tv_band && best_t < 0) {
      std::vector<double> levels;
      for (double l = res.t_upper / 2;
           l >= tv_band && int(levels.size()) + 1 < cfg_.bisection_depth;
           l /= 2)
        levels.push_back(l);
      levels.push_back(0.0);
      for (double level : levels) {
        const double accept = level > 0 ? 0.0 : -0.5 * tv_band;
        run_level(level, accept, best, best_t, res.iterations);
        if (best_t >= accept) break;
      }
    }

    res.t = best_t;
    res.gamma = best;
    res.found = best_t >= -0.5 * tv_band;
    if (res.found) {
      // Lift γ into the QCM set if it sits marginally below iΩ.
      const double t1 = min_eigenvalue(
          MatrixXd(realify(ComplexPair<double>::real(best)) - lr_));
      if (t1 < 0) res.gamma += (-t1) * MatrixXd::Identity(d_, d_);
    }
    return res;
  }

 private:
  void run_level(double level, double accept, MatrixXd& best, double& best_t,
                 int& iterations) {
    const Index dd = 2 * d_;
    const MatrixXd id = MatrixXd::Identity(dd, dd);
    const MatrixXd lo = lr_ + level * id;
    const MatrixXd hi = nr_ - level * id;
    MatrixXd x = realify(ComplexPair<double>::real(best));
    MatrixXd p1 = MatrixXd::Zero(dd, dd), p2 = MatrixXd::Zero(dd, dd);
    int still = 0;
    for (int it = 1; it <= cfg_.max_iterations; ++it) {
      ++iterations;
      const MatrixXd a = x + p1;
      const MatrixXd y1 = lo + psd_part(MatrixXd(a - lo));
      p1 = a - y1;
      const MatrixXd b = y1 + p2;
      const MatrixXd y2 = hi - psd_part(MatrixXd(hi - b));
      p2 = b - y2;
      const MatrixXd s = project_sub(y2);
      const MatrixXd xn = realify(ComplexPair<double>::real(s));
      const double step = (xn - x).norm();
      x = xn;
      if (it % 5 == 0) {
        const double tv = t_value(s);
        if (tv > best_t) {
          best_t = tv;
          best = s;
        }
        if (best_t >= accept) return;
      }
      if (step <= 1e-13 * scale_) {
        if (++still >= 20) break;
      } else {
        still = 0;
      }
    }
    const MatrixXd s = project_sub(x);
    const double tv = t_value(s);
    if (tv > best_t) {
      best_t = tv;
      best = s;
    }
  }

 public:
  /// Dykstra over PSD pairs, the trace/subspace constraints and the
  /// half-space f ≤ −δ. Returns the certified bound of the best pair found.
  double dual(double delta, ComplexPair<double>& y_out,
              ComplexPair<double>& z_out, int& iterations) const {
    const Index d = d_;
    const MatrixXd id = MatrixXd::Identity(d, d);
    const ComplexPair<double> zero(MatrixXd::Zero(d, d), MatrixXd::Zero(d, d));
    const ComplexPair<double> gy(MatrixXd::Zero(d, d), -om_);
    const ComplexPair<double> gz = n_;
    const double gnorm2 = frob_dot(gy, gy) + frob_dot(gz, gz);
    ComplexPair<double> y(id / double(2 * d), MatrixXd::Zero(d, d)), z = y;
    ComplexPair<double> q1y = zero, q1z = zero, q3y = zero, q3z = zero;
    double best = std::numeric_limits<double>::infinity();
    const double target = -1.5 * cfg_.tol.verdict * scale_;
    for (int it = 1; it <= cfg_.max_iterations; ++it) {
      ++iterations;
      const ComplexPair<double> ay = y + q1y, az = z + q1z;
      const ComplexPair<double> y1 = hermitian_psd(ay), z1 = hermitian_psd(az);
      q1y = ay - y1;
      q1z = az - z1;

      ComplexPair<double> y2 = y1, z2 = z1;
      const MatrixXd dsub =
          zero_cross_blocks(symmetrize(MatrixXd(y1.re - z1.re)), blocks_);
      y2.re -= dsub / 2;
      z2.re += dsub / 2;
      const double tr = y2.re.trace() + z2.re.trace();
      const double alpha = (1.0 - tr) / double(2 * d);
      y2.re += alpha * id;
      z2.re += alpha * id;

      const ComplexPair<double> by = y2 + q3y, bz = z2 + q3z;
      const double val = frob_dot(gy, by) + frob_dot(gz, bz);
      const double c = std::max(0.0, val + delta) / gnorm2;
      y = by - gy * c;
      z = bz - gz * c;
      q3y = by - y;
      q3z = bz - z;

      if (it % 10 == 0) {
        const double b = certified_bound(y1, z1);
        if (b < best) {
          best = b;
          y_out = y1;
          z_out = z1;
        }
        if (best < target) break;
      }
    }
    return best;
  }

  /// (f + ‖P_S Re(Y − Z)‖_F·B) / tr(Y + Z) for PSD Y, Z.
  double certified_bound(const ComplexPair<double>& y,
                         const ComplexPair<double>& z) const {
    const double c = cfg_.tol.verdict * scale_;
    const ComplexPair<double> iom(MatrixXd::Zero(d_, d_), om_);
    const double f = frob_dot(z, n_) - frob_dot(y, iom);
    const MatrixXd r =
        zero_cross_blocks(symmetrize(MatrixXd(y.re - z.re)), blocks_);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(n_.re),
                                               Eigen::EigenvaluesOnly);
    const double lmax = std::abs(es.eigenvalues()(d_ - 1));
    const double gamma_bound = std::sqrt(double(d_)) * (lmax + c);
    const double tr = y.re.trace() + z.re.trace();
    if (!(tr > 0)) return std::numeric_limits<double>::infinity();
    return (f + r.norm() * gamma_bound) / tr;
  }

 private:
  ComplexPair<double> n_;
  std::vector<Index> blocks_;
  const SolverConfig& cfg_;
  double scale_;
  Index d_ = 0;
  MatrixXd om_, nr_, lr_;
};

SeparabilityCert trivial_cert(const QCM& v) {
  SeparabilityCert c;
  c.verdict = Verdict::Separable;
  c.route = Route::Trivial;
  const QCM mw = v.modewise();
  if (v.m() > 0 && v.n() > 0)
    throw DomainError("trivial certificate needs an empty party");
  c.groups = bipartite_groups(v.layout());
  c.gammas = {mw.va(), mw.vb()};
  c.margin = 0.0;
  return c;
}

int largest_group(const std::vector<std::vector<int>>& groups) {
  int fixed = 0;
  for (int g = 0; g < int(groups.size()); ++g)
    if (groups[g].size() >= groups[fixed].size()) fixed = g;
  return fixed;
}

}  // namespace

const char* to_string(Verdict v) { return kVerdictNames[int(v)]; }
const char* to_string(Route r) { return kRouteNames[int(r)]; }

Verdict verdict_from_string(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kVerdictNames[i]) return Verdict(i);
  throw DomainError("unknown verdict '" + s + "'");
}

Route route_from_string(const std::string& s) {
  for (int i = 0; i < 8; ++i)
    if (s == kRouteNames[i]) return Route(i);
  throw DomainError("unknown route '" + s + "'");
}

std::vector<std::vector<int>> bipartite_groups(const ModeLayout& layout) {
  std::vector<int> a(layout.m), b(layout.n);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), layout.m);
  return {a, b};
}

ComplexPair<double> upper_bound_split(const MatrixXd& v, Index da, double eps,
                                      int sign, const Tolerances& tol) {
  const Index d = v.rows(), db = d - da;
  if (da < 2 || db < 2 || da % 2 || db % 2)
    throw DomainError("upper_bound: both parts need at least one mode");
  const MatrixXd vs = symmetrize(v);
  const double scale = spectral_norm(vs);
  const MatrixXd x = vs.topRightCorner(da, db);
  ComplexPair<double> blk(vs.bottomRightCorner(db, db),
                          double(sign) * omega_modes(int(db / 2)));
  blk.re += eps * MatrixXd::Identity(db, db);
  if (eps == 0.0) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(blk);
    if (ev.cwiseAbs().minCoeff() < tol.psd * scale)
      throw ConditioningError(
          "upper_bound: V_B − iΩ_B is singular; retry with eps > 0");
  }
  const ComplexPair<double> inv = inverse(blk);
  ComplexPair<double> n = ComplexPair<double>::real(vs.topLeftCorner(da, da)) -
                          x * inv * MatrixXd(x.transpose());
  return n.hermitian_part();
}

ComplexPair<double> upper_bound(const QCM& v, double eps, int sign,
                                const Tolerances& tol) {
  if (v.n() == 0 || v.m() == 0)
    throw DomainError("upper_bound: both parties need modes");
  const QCM mw = v.modewise();
  // X = 0 gives V_A exactly.
  if (mw.x().isZero(0.0)) return ComplexPair<double>::real(mw.va());
  return upper_bound_split(mw.matrix(), 2 * Index(v.m()), eps, sign, tol);
}

IntervalResult interval_feasibility_2x2(const MatrixInterval& in,
                                        const Tolerances& tol) {
  if (in.lower.rows() != 2 || in.upper.rows() != 2)
    throw DomainError("interval_feasibility_2x2: matrices must be 2x2");
  const ComplexPair<double> m = in.lower.hermitian_part();
  const ComplexPair<double> n = in.upper.hermitian_part();
  IntervalResult r;
  r.gap = min_eigenvalue(n - m);
  r.gap_conjugate = min_eigenvalue(n.conjugate() - m);
  r.feasible = r.gap >= -tol.verdict && r.gap_conjugate >= -tol.verdict;
  if (!r.feasible) return r;
  const double mi = m.im(0, 1);
  ComplexPair<double> np = n;
  if (np.im(0, 1) * mi > 0) np = n.conjugate();
  const double ni = np.im(0, 1);
  r.p = mi != ni ? ni / (ni - mi) : 0.0;
  const ComplexPair<double> rr = m * r.p + np * (1.0 - r.p);
  r.r = symmetrize(rr.re);
  return r;
}

MatrixXd assemble_gammas(const std::vector<std::vector<int>>& groups,
                         const std::vector<MatrixXd>& gammas, int modes) {
  MatrixXd out = MatrixXd::Zero(2 * modes, 2 * modes);
  for (size_t g = 0; g < groups.size(); ++g) {
    const auto& idx = groups[g];
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b)
        out.block(2 * idx[a], 2 * idx[b], 2, 2) =
            gammas[g].block(2 * a, 2 * b, 2, 2);
  }
  return out;
}

bool complete_certificate(const QCM& v, SeparabilityCert& cert, int fixed,
                          const Tolerances& tol) {
  const QCM mw = v.modewise();
  const double scale = spectral_norm(mw.matrix());
  const std::vector<int> perm = engine_order(cert.groups, fixed);
  const MatrixXd vp = permute_modes(mw.matrix(), perm);
  const Index db = 2 * Index(cert.groups[fixed].size());
  const Index da = vp.rows() - db;
  cert.gammas.resize(cert.groups.size());
  if (da == 0) {
    cert.gammas[fixed] = vp;
    return validate_certificate(v, cert, tol).ok;
  }
  MatrixXd gam = MatrixXd::Zero(da, da);
  Index off = 0;
  for (int g = 0; g < int(cert.groups.size()); ++g) {
    if (g == fixed) continue;
    const Index k = cert.gammas[g].rows();
    gam.block(off, off, k, k) = cert.gammas[g];
    off += k;
  }
  const MatrixXd dmat = symmetrize(MatrixXd(vp.topLeftCorner(da, da) - gam));
  const MatrixXd x = vp.topRightCorner(da, db);
  const MatrixXd vb = vp.bottomRightCorner(db, db);

  std::vector<double> schedule;
  if (min_eigenvalue(dmat) > tol.psd * scale) schedule.push_back(0.0);
  for (int j = 0; j <= 3; ++j) schedule.push_back(tol.psd * scale * std::pow(10.0, j));
  for (double eps : schedule) {
    const MatrixXd reg = dmat + eps * MatrixXd::Identity(da, da);
    Eigen::LDLT<MatrixXd> ldlt(reg);
    if (ldlt.info() != Eigen::Success) continue;
    cert.gammas[fixed] = symmetrize(MatrixXd(vb - x.transpose() * ldlt.solve(x)));
    if (validate_certificate(v, cert, tol).ok) return true;
  }
  return false;
}

CertCheck validate_certificate(const QCM& v, const SeparabilityCert& cert,
                               const Tolerances& tol) {
  CertCheck out;
  const QCM mw = v.modewise();
  const int modes = v.layout().modes();
  const double scale = spectral_norm(mw.matrix());
  try {
    check_groups(cert.groups, modes, cert.route == Route::Trivial);
  } catch (const DomainError& e) {
    out.reason = e.what();
    return out;
  }

  if (cert.verdict == Verdict::Inconclusive) {
    out.ok = true;
    return out;
  }

  if (cert.verdict == Verdict::Separable) {
    if (cert.gammas.size() != cert.groups.size()) {
      out.reason = "one γ per group expected";
      return out;
    }
    for (size_t g = 0; g < cert.groups.size(); ++g) {
      const int k = int(cert.groups[g].size());
      if (cert.gammas[g].rows() != 2 * k || cert.gammas[g].cols() != 2 * k) {
        out.reason = "γ size does not match its group";
        return out;
      }
      if (k == 0) continue;
      if (!cert.gammas[g].allFinite() ||
          !is_qcm(symmetrize(cert.gammas[g]), ModeLayout{k, 0}, tol).valid) {
        out.reason = "γ of group " + std::to_string(g) + " is not a QCM";
        return out;
      }
    }
    const MatrixXd gam = assemble_gammas(cert.groups, cert.gammas, modes);
    out.min_eigenvalue = min_eigenvalue(MatrixXd(mw.matrix() - gam));
    out.ok = out.min_eigenvalue >= -tol.verdict * scale;
    if (!out.ok) out.reason = "V − ⊕γ is not positive semidefinite";
    return out;
  }

  // Entangled.
  if (cert.route == Route::Dual) {
    double b = std::numeric_limits<double>::infinity();
    try {
      b = dual_certified_bound(v, cert, tol);
    } catch (const std::exception& e) {
      out.reason = e.what();
      return out;
    }
    out.min_eigenvalue = b;
    out.ok = b < -tol.verdict * scale;
    if (!out.ok) out.reason = "dual bound does not certify infeasibility";
    return out;
  }
  if (cert.witness_cut.empty()) {
    out.reason = "entangled certificate carries no witness";
    return out;
  }
  try {
    const PptResult r = is_ppt_across(v, cert.witness_cut, tol);
    out.min_eigenvalue = r.min_symplectic_eigenvalue;
    out.ok = r.min_symplectic_eigenvalue < 1.0 - tol.verdict;
    if (!out.ok) out.reason = "partial transpose across the cut is a QCM";
  } catch (const DomainError& e) {
    out.reason = e.what();
  }
  return out;
}

double dual_certified_bound(const QCM& v, const SeparabilityCert& cert,
                            const Tolerances& tol) {
  const int modes = v.layout().modes();
  check_groups(cert.groups, modes);
  if (cert.fixed_group < 0 || cert.fixed_group >= int(cert.groups.size()))
    throw DomainError("dual certificate: bad fixed group");
  const QCM mw = v.modewise();
  const double scale = spectral_norm(mw.matrix());
  const MatrixXd vp =
      permute_modes(mw.matrix(), engine_order(cert.groups, cert.fixed_group));
  const Index db = 2 * Index(cert.groups[cert.fixed_group].size());
  const Index da = vp.rows() - db;
  if (cert.dual_y.rows() != da || cert.dual_z.rows() != da)
    throw DomainError("dual certificate: Y, Z have the wrong size");
  if (!(cert.epsilon >= 0)) throw DomainError("dual certificate: ε < 0");
  const ComplexPair<double> n =
      upper_bound_split(vp, da, cert.epsilon, -1, tol);
  SolverConfig cfg;
  cfg.tol = tol;
  IntervalEngine eng(n, variable_blocks(cert.groups, cert.fixed_group), cfg,
                     scale);
  return eng.certified_bound(hermitian_psd(cert.dual_y),
                             hermitian_psd(cert.dual_z));
}

SeparabilityCert full_separability(const QCM& v,
                                   const std::vector<std::vector<int>>& groups,
                                   const SolverConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  if (groups.size() < 2) throw DomainError("full_separability: need k ≥ 2");
  check_groups(groups, v.layout().modes());
  if (!is_qcm(v, tol).valid)
    throw DomainError("separability: input is not a valid QCM");

  SeparabilityCert cert;
  cert.groups = groups;

  // Each one-group-versus-rest cut must be PPT.
  double worst = std::numeric_limits<double>::infinity();
  int worst_group = -1;
  for (int g = 0; g < int(groups.size()); ++g) {
    const PptResult r = is_ppt_across(v, groups[g], tol);
    if (r.min_symplectic_eigenvalue < worst) {
      worst = r.min_symplectic_eigenvalue;
      worst_group = g;
    }
    if (groups.size() == 2) break;  // both cuts coincide
  }
  cert.min_pt_symplectic_eigenvalue = worst;
  if (worst < 1.0 - tol.verdict) {
    cert.verdict = Verdict::Entangled;
    cert.route = Route::PptWitness;
    cert.distillable = true;
    cert.witness_cut = groups[worst_group];
    cert.margin = worst - 1.0;
    return cert;
  }

  const QCM mw = v.modewise();
  const double scale = spectral_norm(mw.matrix());
  const int fixed = largest_group(groups);
  cert.fixed_group = fixed;
  const MatrixXd vp = permute_modes(mw.matrix(), engine_order(groups, fixed));
  const Index db = 2 * Index(groups[fixed].size());
  const Index da = vp.rows() - db;

  ComplexPair<double> n = bound_with_retry(vp, da, cfg, scale, &cert.epsilon);
  IntervalEngine eng(n, variable_blocks(groups, fixed), cfg, scale);
  const auto res = eng.solve();
  cert.iterations = res.iterations;
  cert.margin = res.t;

  if (res.found) {
    cert.gammas.assign(groups.size(), MatrixXd());
    Index off = 0;
    for (int g = 0; g < int(groups.size()); ++g) {
      if (g == fixed) continue;
      const Index k = 2 * Index(groups[g].size());
      cert.gammas[g] = res.gamma.block(off, off, k, k);
      off += k;
    }
    cert.verdict = Verdict::Separable;
    cert.route = Route::General;
    if (complete_certificate(v, cert, fixed, tol)) return cert;
    cert.notes.push_back("primal point found but certificate did not validate");
  }
  cert.gammas.clear();

  for (double delta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    ComplexPair<double> y, z;
    int its = 0;
    const double b = eng.dual(delta * scale, y, z, its);
    cert.iterations += its;
    if (b < -tol.verdict * scale) {
      cert.verdict = Verdict::Entangled;
      cert.route = Route::Dual;
      cert.dual_y = y;
      cert.dual_z = z;
      cert.dual_bound = b;
      cert.margin = b;
      cert.notes.push_back("PPT but certified infeasible (bound entanglement)");
      return cert;
    }
  }
  cert.verdict = Verdict::Inconclusive;
  cert.route = Route::General;
  return cert;
}

SeparabilityCert separability_general(const QCM& v, const SolverConfig& cfg) {
  if (!is_qcm(v, cfg.tol).valid)
    throw DomainError("separability: input is not a valid QCM");
  if (v.m() == 0 || v.n() == 0) return trivial_cert(v);
  return full_separability(v, bipartite_groups(v.layout()), cfg);
}

SeparabilityCert separability_1vn(const QCM& v, const SolverConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  if (!is_qcm(v, tol).valid)
    throw DomainError("separability: input is not a valid QCM");
  if (v.m() == 0 || v.n() == 0) return trivial_cert(v);
  if (v.m() != 1 && v.n() != 1)
    throw DomainError("separability_1vn: one party must have a single mode");

  SeparabilityCert cert;
  cert.groups = bipartite_groups(v.layout());
  const PptResult ppt = is_ppt(v, tol);
  cert.min_pt_symplectic_eigenvalue = ppt.min_symplectic_eigenvalue;
  if (!ppt.ppt) {
    cert.verdict = Verdict::Entangled;
    cert.route = Route::PptWitness;
    cert.distillable = true;
    cert.witness_cut = cert.groups[1];
    cert.margin = ppt.min_symplectic_eigenvalue - 1.0;
    return cert;
  }

  // The single-mode party plays the role of A.
  const int var = v.m() == 1 ? 0 : 1, fixed = 1 - var;
  cert.fixed_group = fixed;
  const QCM mw = v.modewise();
  const double scale = spectral_norm(mw.matrix());
  const MatrixXd vp =
      permute_modes(mw.matrix(), engine_order(cert.groups, fixed));
  SolverConfig c2 = cfg;
  ComplexPair<double> nminus = bound_with_retry(vp, 2, c2, scale, &cert.epsilon);
  // N with +iΩ_B is the conjugate of the −iΩ_B bound.
  const ComplexPair<double> n = nminus.conjugate();
  const IntervalResult ir = interval_feasibility_2x2(
      {ComplexPair<double>::imag(omega_modes(1)), n}, tol);
  cert.margin = std::min(ir.gap, ir.gap_conjugate);
  if (!ir.feasible) {
    cert.verdict = Verdict::Inconclusive;
    cert.route = Route::Interval;
    cert.notes.push_back("PPT state with an empty 2x2 interval");
    return cert;
  }
  cert.gammas.assign(2, MatrixXd());
  cert.gammas[var] = ir.r;
  cert.verdict = Verdict::Separable;
  cert.route = Route::Interval;
  if (complete_certificate(v, cert, fixed, tol)) return cert;
  cert.gammas.clear();
  cert.verdict = Verdict::Inconclusive;
  cert.notes.push_back("interval witness did not validate");
  return cert;
}

}  // namespace gaussep
