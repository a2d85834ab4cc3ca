#include <doctest.h>

#include <cmath>

#include "gaussep/symplectic.hpp"
#include "support.hpp"

using namespace gaussep;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using testsupport::sympl_oracle;

TEST_CASE("omega for small layouts") {
  MatrixXd w(2, 2);
  w << 0, 1, -1, 0;
  CHECK(omega(ModeLayout{1, 0}) == w);
  CHECK(omega(ModeLayout{0, 1, Ordering::PositionMomentum}) == w);
  MatrixXd pm(4, 4);
  pm << 0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0;
  CHECK(omega(ModeLayout{1, 1, Ordering::PositionMomentum}) == pm);
  for (int k = 1; k <= 5; ++k) {
    const MatrixXd om = omega_modes(k);
    CHECK(om.transpose() == -om);
    CHECK(om * om == -MatrixXd::Identity(2 * k, 2 * k));
  }
  CHECK_THROWS_AS(omega(ModeLayout{0, 0}), DomainError);
}

TEST_CASE("ordering permutation carries one form to the other") {
  for (int k = 1; k <= 6; ++k) {
    const auto p = modewise_to_pm(k);
    const MatrixXd mw = omega_modes(k), pm = omega_modes(k, Ordering::PositionMomentum);
    CHECK(MatrixXd(p * mw * p.transpose()) == pm);
    CHECK(MatrixXd(p.transpose() * pm * p) == mw);
    // v_pm = P v_mw: x_j lands at j, p_j at k + j
    VectorXd v(2 * k);
    for (int j = 0; j < k; ++j) {
      v(2 * j) = 10 + j;
      v(2 * j + 1) = 100 + j;
    }
    const VectorXd w = p * v;
    for (int j = 0; j < k; ++j) {
      CHECK(w(j) == 10 + j);
      CHECK(w(k + j) == 100 + j);
    }
  }
}

TEST_CASE("reorder") {
  const QCM id(ModeLayout{2, 1}, MatrixXd::Identity(6, 6));
  CHECK(reorder(id, Ordering::PositionMomentum).matrix() == MatrixXd::Identity(6, 6));

  const QCM v = random_qcm(7, ModeLayout{2, 2}, Purity::Mixed(3), 1.0);
  const QCM back = reorder(reorder(v, Ordering::PositionMomentum), Ordering::ModeWise);
  CHECK(back.matrix() == v.matrix());
  CHECK(back.layout() == v.layout());

  const QCM t = tmsv(1.0);
  const QCM tpm = reorder(t, Ordering::PositionMomentum);
  const VectorXd s1 = sympl_oracle(t.matrix());
  const VectorXd s2 = sympl_oracle(tpm.matrix(), Ordering::PositionMomentum);
  CHECK((s1 - VectorXd::Ones(2)).norm() < 1e-12);
  CHECK((s2 - VectorXd::Ones(2)).norm() < 1e-12);
  CHECK((symplectic_spectrum(tpm) - VectorXd::Ones(2)).norm() < 1e-12);
}

TEST_CASE("is_qcm examples") {
  for (ModeLayout l : {ModeLayout{1, 0}, ModeLayout{1, 1}, ModeLayout{2, 3}}) {
    CHECK(is_qcm(MatrixXd::Identity(l.dim(), l.dim()), l).valid);
    CHECK_FALSE(is_qcm(0.5 * MatrixXd::Identity(l.dim(), l.dim()), l).valid);
  }
  const auto r = is_qcm(tmsv(1.0));
  CHECK(r.valid);
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.3;
  CHECK_THROWS_AS(is_qcm(asym, ModeLayout{1, 0}), DomainError);
}

TEST_CASE("is_qcm matches a complex Hermitian oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> scale(0.3, 1.5);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + t % 4;
    const MatrixXd v =
        scale(rng) * random_qcm(1000 + t, ModeLayout{k, 0}, Purity::Mixed(2), 1.0).matrix();
    const double oracle = testsupport::heisenberg_oracle(v);
    const auto r = is_qcm(v, ModeLayout{k, 0});
    CHECK(r.min_eigenvalue == doctest::Approx(oracle).epsilon(1e-8).scale(v.norm()));
    if (std::abs(oracle) > 1e-7 * v.norm()) CHECK(r.valid == (oracle > 0));
  }
}

TEST_CASE("symplectic spectrum examples") {
  CHECK((symplectic_spectrum(thermal(2.5, 3)) - VectorXd::Constant(3, 2.5)).norm() < 1e-12);
  for (double r : {0.0, 0.3, 1.0, 2.0})
    CHECK((symplectic_spectrum(tmsv(r)) - VectorXd::Ones(2)).norm() < 1e-9);

  const QCM pt = partial_transpose(tmsv(1.0));
  const VectorXd oracle = sympl_oracle(pt.matrix());
  const VectorXd got = symplectic_spectrum(pt);
  CHECK(got(0) == doctest::Approx(oracle(0)).epsilon(1e-12));
  CHECK(got(1) == doctest::Approx(oracle(1)).epsilon(1e-12));
  CHECK(got(0) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
  CHECK(got(1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(symplectic_spectrum(MatrixXd(-MatrixXd::Identity(2, 2))), DomainError);
}

TEST_CASE("symplectic spectrum matches the oracle and is congruence invariant") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + t % 5;
    const MatrixXd v = testsupport::random_spd(rng, 2 * k, 0.2, 5.0);
    const VectorXd nu = symplectic_spectrum(v);
    CHECK((nu - sympl_oracle(v)).norm() <= 1e-8 * v.norm());
    const MatrixXd s = testsupport::random_symplectic(rng, k, 0.7);
    const MatrixXd w = s * v * s.transpose();
    CHECK((symplectic_spectrum(w) - nu).norm() <= 1e-8 * w.norm());
  }
}

namespace {

void check_williamson(const MatrixXd& v, const WilliamsonDecomposition<double>& wd,
                      double tol) {
  const int k = int(v.rows() / 2);
  const MatrixXd om = omega_modes(k);
  VectorXd diag(2 * k);
  for (int j = 0; j < k; ++j) diag(2 * j) = diag(2 * j + 1) = wd.nu(j);
  const double scale = v.norm();
  CHECK((wd.S * om * wd.S.transpose() - om).norm() <= tol * scale);
  CHECK((wd.S * v * wd.S.transpose() - MatrixXd(diag.asDiagonal())).norm() <= tol * scale);
  CHECK(wd.nu.minCoeff() > 0);
  for (int j = 1; j < k; ++j) CHECK(wd.nu(j - 1) >= wd.nu(j));
}

}  // namespace

TEST_CASE("williamson examples") {
  const auto id = williamson(MatrixXd(MatrixXd::Identity(4, 4)));
  CHECK((id.nu - VectorXd::Ones(2)).norm() < 1e-12);
  CHECK((id.S * id.S.transpose() - MatrixXd::Identity(4, 4)).norm() < 1e-10);

  const auto single = williamson(MatrixXd(4 * MatrixXd::Identity(2, 2)));
  CHECK(single.nu(0) == doctest::Approx(4.0));
  check_williamson(4 * MatrixXd::Identity(2, 2), single, 1e-12);

  std::mt19937_64 rng(47);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd s0 = testsupport::random_symplectic(rng, 2, 1.0);
    VectorXd d(4);
    d << 2, 2, 3, 3;
    const MatrixXd v = s0 * d.asDiagonal() * s0.transpose();
    const auto wd = williamson(v);
    CHECK(wd.nu(0) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(wd.nu(1) == doctest::Approx(2.0).epsilon(1e-8));
    check_williamson(v, wd, 1e-8);
  }
}

TEST_CASE("williamson with degenerate spectra") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 4;
    const MatrixXd s0 = testsupport::random_symplectic(rng, k, 1.0);
    VectorXd d(2 * k);
    for (int j = 0; j < k; ++j) d(2 * j) = d(2 * j + 1) = (j % 2 == 0) ? 1.5 : 1.0;
    const MatrixXd v = s0 * d.asDiagonal() * s0.transpose();
    check_williamson(v, williamson(v), 1e-8);
  }
  check_williamson(MatrixXd::Identity(8, 8), williamson(MatrixXd(MatrixXd::Identity(8, 8))), 1e-12);
}

TEST_CASE("williamson round trip on random positive matrices") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + t % 8;
    const MatrixXd v = testsupport::random_spd(rng, 2 * k, 0.2, 5.0);
    check_williamson(v, williamson(v), 1e-8);
  }
}

TEST_CASE("williamson rejects near-singular input") {
  MatrixXd v = MatrixXd::Identity(2, 2);
  v(0, 0) = 1e-12;
  CHECK_THROWS_AS(williamson(v), ConditioningError);
}

TEST_CASE("partial transpose") {
  MatrixXd gb = MatrixXd::Zero(2, 2);
  gb.diagonal() << 2, 0.5;
  const QCM prod = product_state(MatrixXd::Identity(2, 2), gb);
  CHECK(partial_transpose(prod).matrix() == prod.matrix());

  const QCM t = tmsv(0.7);
  const QCM tt = partial_transpose(t);
  const double s = std::sinh(1.4);
  CHECK(tt.matrix()(0, 2) == s);
  CHECK(tt.matrix()(1, 3) == s);  // sζ·ζ = s·I
  CHECK(partial_transpose(tt).matrix() == t.matrix());

  const QCM v = random_qcm(5, ModeLayout{2, 3}, Purity::Mixed(2), 1.0);
  const QCM vt = partial_transpose(v);
  CHECK(partial_transpose(vt).matrix() == v.matrix());
  Eigen::SelfAdjointEigenSolver<MatrixXd> e1(v.matrix()), e2(vt.matrix());
  CHECK((e1.eigenvalues() - e2.eigenvalues()).norm() < 1e-12 * v.matrix().norm());

  CHECK_THROWS_AS(partial_transpose(thermal(1, 2)), DomainError);
}

TEST_CASE("partial transpose mask") {
  for (Ordering o : {Ordering::ModeWise, Ordering::PositionMomentum}) {
    const ModeLayout l{2, 3, o};
    const auto mask = partial_transpose_mask(l);
    const MatrixXd th = mask.theta.asDiagonal();
    CHECK(th * th == MatrixXd::Identity(10, 10));
    const MatrixXd om = omega(l);
    const MatrixXd flipped = th * om * th;
    // Ω_A kept, Ω_B negated
    MatrixXd expected = om;
    const MatrixXd id = MatrixXd::Identity(10, 10);
    const auto p = modewise_to_pm(5);
    VectorXd bmask = VectorXd::Zero(10);
    for (int j = 2; j < 5; ++j) {
      if (o == Ordering::ModeWise) bmask(2 * j) = bmask(2 * j + 1) = 1;
      else bmask(j) = bmask(5 + j) = 1;
    }
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if (bmask(i) > 0 && bmask(j) > 0) expected(i, j) = -om(i, j);
    CHECK(flipped == expected);
    (void)id;
    (void)p;
  }
}

TEST_CASE("ppt examples") {
  std::mt19937_64 rng(61);
  const QCM ga = random_qcm(1, ModeLayout{2, 0}, Purity::Mixed(2), 1.0);
  const QCM gb = random_qcm(2, ModeLayout{1, 0}, Purity::Mixed(2), 1.0);
  CHECK(is_ppt(product_state(ga.matrix(), gb.matrix())).ppt);

  const auto r = is_ppt(tmsv(1.0));
  CHECK_FALSE(r.ppt);
  CHECK(r.distillable);
  const double oracle = sympl_oracle(partial_transpose(tmsv(1.0)).matrix())(1);
  CHECK(r.min_symplectic_eigenvalue == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(r.min_symplectic_eigenvalue == doctest::Approx(0.1353352832366127).epsilon(1e-12));

  CHECK(is_ppt(tmsv(0.0)).ppt);
  CHECK_THROWS_AS(is_ppt(QCM(ModeLayout{1, 1}, 0.5 * MatrixXd::Identity(4, 4))), DomainError);
}

TEST_CASE("tmsv and thermal constructors") {
  CHECK(tmsv(0.0).matrix() == MatrixXd::Identity(4, 4));
  const QCM t = tmsv(0.5);
  // cosh 1 and sinh 1
  CHECK(t.matrix()(0, 0) == doctest::Approx(1.5430806348152437));
  CHECK(t.matrix()(0, 2) == doctest::Approx(1.1752011936438014));
  CHECK(t.matrix()(1, 3) == doctest::Approx(-1.1752011936438014));
  CHECK(t.matrix()(3, 3) == doctest::Approx(1.5430806348152437));
  MatrixXd d = MatrixXd::Zero(2, 2);
  d.diagonal() << 2, 2;
  CHECK(thermal(2, 1).matrix() == d);
  CHECK_THROWS_AS(thermal(0.9, 1), DomainError);
  for (double r : {0.0, 0.4, 1.0, 2.5}) {
    const TMSVParams p{r};
    CHECK(std::abs(p.c() * p.c() - p.s() * p.s() - 1) <= 1e-8 * p.c() * p.c());
  }
}

TEST_CASE("random qcm") {
  const QCM flat = random_qcm(3, ModeLayout{2, 2}, Purity::Pure(), 0.0);
  CHECK((symplectic_spectrum(flat) - VectorXd::Ones(4)).norm() < 1e-12);

  const QCM a = random_qcm(99, ModeLayout{2, 1}, Purity::Mixed(3), 1.5);
  const QCM b = random_qcm(99, ModeLayout{2, 1}, Purity::Mixed(3), 1.5);
  CHECK(a.matrix() == b.matrix());

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const int m = 1 + int(seed % 3), n = int(seed % 4);
    const bool pure = seed % 2 == 0;
    const QCM v = random_qcm(seed, ModeLayout{m, n},
                             pure ? Purity::Pure() : Purity::Mixed(3), 1.5);
    const double scale = v.matrix().norm();
    CHECK(is_qcm(v).min_eigenvalue >= -1e-9 * scale);
    if (pure) {
      const MatrixXd om = omega(v.layout());
      const MatrixXd vo = v.matrix() * om;
      const int d = int(v.dim());
      CHECK((vo * vo + MatrixXd::Identity(d, d)).norm() <= 1e-8 * scale * scale);
    }
  }

  const QCM pm = random_qcm(5, ModeLayout{1, 1, Ordering::PositionMomentum},
                            Purity::Mixed(2), 1.0);
  CHECK(pm.layout().ordering == Ordering::PositionMomentum);
  CHECK(is_qcm(pm).valid);
}

TEST_CASE("swap, direct sums and mode permutations") {
  const QCM v = random_qcm(8, ModeLayout{1, 2}, Purity::Mixed(2), 1.0);
  const QCM s = swap_parties(v);
  CHECK(s.m() == 2);
  CHECK(s.n() == 1);
  CHECK(swap_parties(s).matrix() == v.matrix());
  CHECK(s.va() == v.vb());
  CHECK(is_ppt(s).min_symplectic_eigenvalue ==
        doctest::Approx(is_ppt(v).min_symplectic_eigenvalue).epsilon(1e-10));

  const QCM sum = bipartite_direct_sum(tmsv(0.3), thermal(2, 1, 1));
  CHECK(sum.m() == 2);
  CHECK(sum.n() == 2);
  CHECK(sum.matrix()(0, 4) == doctest::Approx(std::sinh(0.6)));
  CHECK(sum.matrix()(2, 2) == 2.0);
  CHECK(sum.matrix()(0, 2) == 0.0);
}

TEST_CASE("qcm construction") {
  CHECK_THROWS_AS(QCM(ModeLayout{1, 1}, MatrixXd::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(QCM(ModeLayout{1, 0}, MatrixXd(-MatrixXd::Identity(2, 2))), DomainError);
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.2;
  const QCM q(ModeLayout{1, 0}, asym);
  CHECK(q.matrix()(0, 1) == q.matrix()(1, 0));
  CHECK(ordering_from_string("pm") == Ordering::PositionMomentum);
  CHECK_THROWS_AS(ordering_from_string("xyz"), DomainError);
}
