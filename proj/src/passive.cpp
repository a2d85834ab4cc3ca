#include "gaussep/passive.hpp"

#include <cmath>
#include <limits>

namespace gaussep {

Eigen::MatrixXd PassiveTransform::modewise() const {
  const auto p = modewise_to_pm(modes());
  return p.transpose() * k_pm * p;
}

PassiveTransform passive_from_unitary(const Eigen::MatrixXcd& u,
                                      const Tolerances& tol) {
  if (u.rows() != u.cols() || u.rows() < 1)
    throw DomainError("passive_from_unitary: U must be square and non-empty");
  const Index n = u.rows();
  const double dev =
      (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();
  if (dev > tol.alg)
    throw DomainError("passive_from_unitary: U is not unitary (‖UU† − I‖_F = " +
                      std::to_string(dev) + ")");
  return {u, realify(ComplexPair<double>(u.real(), u.imag()))};
}

Eigen::MatrixXcd haar_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (Index i = 0; i < g.size(); ++i)
    g(i) = std::complex<double>(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

PassiveTransform random_passive(std::uint64_t seed, int n) {
  if (n < 1) throw DomainError("random_passive: n must be ≥ 1");
  std::mt19937_64 rng(seed);
  return passive_from_unitary(haar_unitary(rng, n));
}

QCM passive_congruence(const QCM& v, const PassiveTransform& k) {
  if (k.modes() != v.layout().modes())
    throw DomainError("passive_congruence: mode count mismatch");
  const Eigen::MatrixXd km = v.layout().ordering == Ordering::ModeWise
                                 ? k.modewise()
                                 : k.k_pm;
  return QCM::trusted(v.layout(), km * v.matrix() * km.transpose());
}

SymplecticVsOrdinary sympl_vs_ordinary_check(const Eigen::MatrixXd& a,
                                             const Tolerances& tol) {
  const Eigen::VectorXd nu = symplectic_spectrum(a, tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a),
                                                    Eigen::EigenvaluesOnly);
  const double nu1 = nu(nu.size() - 1);
  return {nu1 * nu1, es.eigenvalues()(0) * es.eigenvalues()(1)};
}

const char* to_string(AbsVerdict v) {
  return v == AbsVerdict::AbsolutelySeparable ? "absolutely_separable"
                                              : "not_absolute";
}

namespace {

Eigen::MatrixXd rank_one_marginal(const Eigen::VectorXd& u, double k) {
  const Index d = u.size();
  const Eigen::MatrixXd uu = u * u.transpose();
  return symmetrize(Eigen::MatrixXd(
      k * uu + (1.0 / k) * (Eigen::MatrixXd::Identity(d, d) - uu)));
}

Eigen::VectorXd unit_or_e1(const Eigen::VectorXd& u, double weight) {
  if (weight <= 0.0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(u.size());
    e(0) = 1.0;
    return e;
  }
  return u / std::sqrt(weight);
}

double identity_residual(const Eigen::MatrixXd& vm, const AbsSepCert& c) {
  const Index d = vm.rows(), da = c.y.size();
  const Eigen::MatrixXd xx = c.x * c.x.transpose();
  const Eigen::MatrixXd low =
      c.k * xx + (1.0 / c.k) * (Eigen::MatrixXd::Identity(d, d) - xx);
  Eigen::VectorXd w(d);
  w.head(da) = std::sqrt(1.0 - c.p) * c.y;
  w.tail(d - da) = -std::sqrt(c.p) * c.z;
  return (low - direct_sum(c.gamma_a, c.gamma_b) -
          (1.0 / c.k - c.k) * w * w.transpose())
      .norm();
}

}  // namespace

AbsSepCert absolute_separability(const QCM& v, const Tolerances& tol) {
  if (!is_qcm(v, tol).valid)
    throw DomainError("absolute_separability: input is not a valid QCM");
  if (v.m() < 1 || v.n() < 1)
    throw DomainError("absolute_separability: both parties need modes");
  const QCM mw = v.modewise();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mw.matrix());
  AbsSepCert c;
  c.lambda1 = es.eigenvalues()(0);
  c.lambda2 = es.eigenvalues()(1);
  if (c.lambda1 * c.lambda2 < 1.0 - tol.verdict) return c;

  c.verdict = AbsVerdict::AbsolutelySeparable;
  c.has_witness = true;
  const Index da = 2 * Index(v.m()), db = 2 * Index(v.n());
  if (c.lambda1 >= 1.0) {
    c.gamma_a = Eigen::MatrixXd::Identity(da, da);
    c.gamma_b = Eigen::MatrixXd::Identity(db, db);
  } else {
    c.k_branch = true;
    c.k = c.lambda1;
    c.x = es.eigenvectors().col(0);
    c.p = std::clamp(c.x.head(da).squaredNorm(), 0.0, 1.0);
    c.y = unit_or_e1(c.x.head(da), c.p);
    c.z = unit_or_e1(c.x.tail(db), 1.0 - c.p);
    c.gamma_a = rank_one_marginal(c.y, c.k);
    c.gamma_b = rank_one_marginal(c.z, c.k);
    c.identity_residual = identity_residual(mw.matrix(), c);
  }
  c.witness_min_eigenvalue =
      min_eigenvalue(Eigen::MatrixXd(mw.matrix() -
                                     direct_sum(c.gamma_a, c.gamma_b)));
  return c;
}

bool validate_abs_cert(const QCM& v, const AbsSepCert& cert,
                       const Tolerances& tol) {
  if (cert.verdict != AbsVerdict::AbsolutelySeparable) return true;
  if (!cert.has_witness) return false;
  const QCM mw = v.modewise();
  const double scale = spectral_norm(mw.matrix());
  const Index da = 2 * Index(v.m()), db = 2 * Index(v.n());
  if (cert.gamma_a.rows() != da || cert.gamma_b.rows() != db) return false;
  if (!is_qcm(cert.gamma_a, ModeLayout{v.m(), 0}, tol).valid) return false;
  if (!is_qcm(cert.gamma_b, ModeLayout{0, v.n()}, tol).valid) return false;
  const double lmin = min_eigenvalue(
      Eigen::MatrixXd(mw.matrix() - direct_sum(cert.gamma_a, cert.gamma_b)));
  if (lmin < -tol.verdict * scale) return false;
  if (cert.k_branch) {
    if (std::abs(cert.x.norm() - 1.0) > tol.alg) return false;
    if (std::abs(cert.y.norm() - 1.0) > tol.alg) return false;
    if (std::abs(cert.z.norm() - 1.0) > tol.alg) return false;
    if (cert.p < 0.0 || cert.p > 1.0) return false;
    if (identity_residual(mw.matrix(), cert) > tol.alg * std::max(scale, 1.0))
      return false;
  }
  return true;
}

OrbitReport passive_orbit_check(const QCM& v, int trials, std::uint64_t seed,
                                const Tolerances& tol) {
  const AbsSepCert base = absolute_separability(v, tol);
  const double base_product = base.lambda1 * base.lambda2;
  OrbitReport rep;
  rep.trials = trials;
  rep.verdict = base.verdict;
  rep.min_pt_symplectic_eigenvalue = std::numeric_limits<double>::infinity();
  const bool absolute = base.verdict == AbsVerdict::AbsolutelySeparable;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                      std::uint32_t(t)};
    std::mt19937_64 rng(seq);
    const PassiveTransform k =
        passive_from_unitary(haar_unitary(rng, v.layout().modes()));
    const QCM w = passive_congruence(v, k);
    const PptResult ppt = is_ppt(w, tol);
    if (ppt.min_symplectic_eigenvalue < rep.min_pt_symplectic_eigenvalue)
      rep.min_pt_symplectic_eigenvalue = ppt.min_symplectic_eigenvalue;
    if (!ppt.ppt) {
      if (rep.entangling_trial < 0) rep.entangling_trial = t;
      if (absolute) ++rep.ppt_violations;
    }
    const AbsSepCert c = absolute_separability(w, tol);
    rep.max_lambda_product_drift =
        std::max(rep.max_lambda_product_drift,
                 std::abs(c.lambda1 * c.lambda2 - base_product));
    if (c.verdict != base.verdict) ++rep.verdict_changes;
    if (absolute && !validate_abs_cert(w, c, tol)) ++rep.cert_failures;
  }
  return rep;
}

}  // namespace gaussep
