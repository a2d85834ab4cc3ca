#include <doctest.h>

#include <cmath>
#include <complex>

#include "gaussep/passive.hpp"
#include "support.hpp"

using namespace gaussep;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

/// W†(U ⊕ U*)W evaluated in complex arithmetic.
MatrixXd k_oracle(const MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  MatrixXcd w(2 * n, 2 * n);
  w << id, cd(0, 1) * id, id, cd(0, -1) * id;
  w /= std::sqrt(2.0);
  MatrixXcd uu = MatrixXcd::Zero(2 * n, 2 * n);
  uu.topLeftCorner(n, n) = u;
  uu.bottomRightCorner(n, n) = u.conjugate();
  const MatrixXcd k = w.adjoint() * uu * w;
  CHECK(k.imag().norm() < 1e-12);
  return k.real();
}

void check_passive(const PassiveTransform& p) {
  const int n = p.modes();
  const MatrixXd k = p.modewise();
  const MatrixXd om = omega_modes(n);
  CHECK((k * k.transpose() - MatrixXd::Identity(2 * n, 2 * n)).norm() <= 1e-8);
  CHECK((k * om * k.transpose() - om).norm() <= 1e-8);
  const MatrixXd ompm = omega_modes(n, Ordering::PositionMomentum);
  CHECK((p.k_pm * ompm * p.k_pm.transpose() - ompm).norm() <= 1e-8);
}

}  // namespace

TEST_CASE("passive from unitary") {
  const auto id = passive_from_unitary(MatrixXcd::Identity(3, 3));
  CHECK(id.k_pm == MatrixXd::Identity(6, 6));

  MatrixXcd u(1, 1);
  u(0, 0) = std::polar(1.0, M_PI / 2);
  const auto rot = passive_from_unitary(u);
  CHECK((rot.k_pm - k_oracle(u)).norm() < 1e-14);
  MatrixXd expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((rot.k_pm - expected).norm() < 1e-15);

  for (double th : {0.3, 1.1, 2.7}) {
    u(0, 0) = std::polar(1.0, th);
    MatrixXd r(2, 2);
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    CHECK((passive_from_unitary(u).k_pm - r).norm() < 1e-14);
  }

  MatrixXcd f(2, 2);
  f << 1, 1, 1, -1;
  f /= std::sqrt(2.0);
  const auto bs = passive_from_unitary(f);
  CHECK((bs.k_pm - k_oracle(f)).norm() < 1e-14);
  check_passive(bs);
  CHECK(std::abs(bs.modewise()(0, 2)) > 0.5);  // mixes the two modes

  MatrixXcd bad = MatrixXcd::Identity(2, 2);
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(passive_from_unitary(bad), DomainError);
}

TEST_CASE("random passive transforms") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + int(seed % 6);
    const auto p = random_passive(seed, n);
    check_passive(p);
    CHECK((p.k_pm - k_oracle(p.unitary)).norm() < 1e-12);
  }
  CHECK(random_passive(12, 4).k_pm == random_passive(12, 4).k_pm);
}

TEST_CASE("haar column statistics") {
  // |U_ij|² has mean 1/n for Haar unitaries.
  const int n = 3, samples = 1000;
  MatrixXd acc = MatrixXd::Zero(n, n);
  for (int s = 0; s < samples; ++s)
    acc += random_passive(5000 + s, n).unitary.cwiseAbs2();
  acc /= samples;
  CHECK((acc.array() - 1.0 / n).abs().maxCoeff() < 0.05);
}

TEST_CASE("symplectic versus ordinary eigenvalues") {
  const auto id = sympl_vs_ordinary_check(MatrixXd::Identity(4, 4));
  CHECK(id.nu1_squared == doctest::Approx(1.0));
  CHECK(id.lambda_product == doctest::Approx(1.0));
  const auto t = sympl_vs_ordinary_check(tmsv(1.0).matrix());
  CHECK(t.nu1_squared == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.lambda_product == doctest::Approx(std::exp(-4.0)).epsilon(1e-9));

  std::mt19937_64 rng(71);
  for (int i = 0; i < 2000; ++i) {
    const int k = 1 + i % 10;
    const MatrixXd a = testsupport::random_spd(rng, 2 * k, 0.05, 20.0);
    const auto r = sympl_vs_ordinary_check(a);
    const double sc = a.norm();
    CHECK(r.nu1_squared >= r.lambda_product - 1e-8 * sc * sc);
  }
}

TEST_CASE("positive matrices with lambda1 lambda2 >= 1 are QCMs") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const int k = 1 + i % 5;
    Eigen::HouseholderQR<MatrixXd> qr(testsupport::gaussian_matrix(rng, 2 * k, 2 * k));
    const MatrixXd q = qr.householderQ();
    VectorXd ev(2 * k);
    const double l1 = 0.2 + 0.8 * u(rng);
    ev(0) = l1;
    for (int j = 1; j < 2 * k; ++j) ev(j) = 1.0 / l1 + 3 * u(rng);
    const MatrixXd v = q * ev.asDiagonal() * q.transpose();
    CHECK(is_qcm(v, ModeLayout{k, 0}).valid);
  }
}

TEST_CASE("absolute separability examples") {
  for (double nu : {1.0, 1.5, 3.0}) {
    const auto c = absolute_separability(thermal(nu, 1, 2));
    CHECK(c.verdict == AbsVerdict::AbsolutelySeparable);
    CHECK_FALSE(c.k_branch);
    CHECK(c.gamma_a == MatrixXd::Identity(2, 2));
    CHECK(validate_abs_cert(thermal(nu, 1, 2), c));
  }
  for (double r : {0.1, 0.5, 1.0}) {
    const auto c = absolute_separability(tmsv(r));
    CHECK(c.verdict == AbsVerdict::NotAbsolute);
    CHECK(c.lambda1 * c.lambda2 == doctest::Approx(std::exp(-4 * r)).epsilon(1e-9));
  }
}

TEST_CASE("absolute separability k-certificate") {
  // Mode 1 in diag(0.8, 1.3), mode 2 in diag(1.3, 1.3): λ₁λ₂ = 1.04.
  VectorXd d(4);
  d << 0.8, 1.3, 1.3, 1.3;
  CHECK(d(0) * d(1) == doctest::Approx(1.04));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MatrixXd k = random_passive(seed, 2).modewise();
    const QCM v(ModeLayout{1, 1}, k * d.asDiagonal() * k.transpose());
    REQUIRE(is_qcm(v).valid);
    const auto c = absolute_separability(v);
    CHECK(c.verdict == AbsVerdict::AbsolutelySeparable);
    CHECK(c.k_branch);
    CHECK(c.k == doctest::Approx(0.8));
    CHECK(c.identity_residual < 1e-12);
    CHECK(c.x.norm() == doctest::Approx(1.0));
    CHECK(c.y.norm() == doctest::Approx(1.0));
    CHECK(c.z.norm() == doctest::Approx(1.0));
    CHECK(c.witness_min_eigenvalue >= -1e-7 * v.matrix().norm());
    CHECK(validate_abs_cert(v, c));
  }
  // p ∈ {0, 1}: the low eigenvector lives on one party only.
  const QCM local(ModeLayout{1, 1}, d.asDiagonal());
  const auto c = absolute_separability(local);
  CHECK(c.p == doctest::Approx(1.0));
  CHECK(validate_abs_cert(local, c));
}

TEST_CASE("absolute separability rejects invalid states") {
  CHECK_THROWS_AS(absolute_separability(QCM(ModeLayout{1, 1}, 0.5 * MatrixXd::Identity(4, 4))),
                  DomainError);
}

TEST_CASE("passive orbit check") {
  const auto th = passive_orbit_check(thermal(1.5, 1, 1), 30, 1);
  CHECK(th.verdict == AbsVerdict::AbsolutelySeparable);
  CHECK(th.ppt_violations == 0);
  CHECK(th.cert_failures == 0);
  CHECK(th.verdict_changes == 0);

  // λ₁λ₂ = 1 on the boundary.
  VectorXd d(4);
  d << 0.25, 4, 4, 4;
  const auto b = passive_orbit_check(QCM(ModeLayout{1, 1}, d.asDiagonal()), 50, 2);
  CHECK(b.ppt_violations == 0);
  CHECK(b.min_pt_symplectic_eigenvalue >= 1 - 1e-7);

  // Separable product state with λ₁λ₂ < 1; a beam splitter entangles it.
  VectorXd e(4);
  e << 0.5, 2, 2, 0.5;
  const auto s = passive_orbit_check(QCM(ModeLayout{1, 1}, e.asDiagonal()), 1000, 3);
  CHECK(s.verdict == AbsVerdict::NotAbsolute);
  CHECK(s.entangling_trial >= 0);
}
