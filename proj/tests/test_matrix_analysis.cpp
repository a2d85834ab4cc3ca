#include <doctest.h>

#include "gaussep/matrix_analysis.hpp"
#include "support.hpp"

using namespace gaussep;
using Eigen::MatrixXd;
using testsupport::min_eig;
using testsupport::random_spd;

TEST_CASE("schur complement of a 2x2") {
  MatrixXd m(2, 2);
  m << 2, 1, 1, 1;
  // b − x·x/a by hand
  const double oracle = 1.0 - 1.0 * 1.0 / 2.0;
  CHECK(schur_complement(m, BlockPartition{1})(0, 0) ==
        doctest::Approx(oracle).epsilon(1e-14));
  CHECK(oracle == 0.5);
}

TEST_CASE("schur complement of a block-diagonal matrix is the B block") {
  std::mt19937_64 rng(3);
  const MatrixXd a = random_spd(rng, 3), b = random_spd(rng, 2);
  const MatrixXd s = schur_complement(direct_sum(a, b), BlockPartition{3});
  CHECK((s - b).norm() <= 1e-13 * b.norm());
}

TEST_CASE("singular leading block needs eps") {
  MatrixXd m(3, 3);
  m << 0, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK_THROWS_AS(schur_complement(m, BlockPartition{1}), ConditioningError);
  CHECK_NOTHROW(schur_complement(m, BlockPartition{1}, 1e-9));
}

TEST_CASE("harmonic mean as a schur complement") {
  // [[A+B, A], [A, A]] / (A+B) = A − A(A+B)⁻¹A = (A⁻¹ + B⁻¹)⁻¹, which is half
  // of A!B with the normalisation ((A⁻¹+B⁻¹)/2)⁻¹.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 4;
    const MatrixXd a = random_spd(rng, d), b = random_spd(rng, d);
    MatrixXd m(2 * d, 2 * d);
    m << a + b, a, a, a;
    const MatrixXd s = schur_complement(m, BlockPartition{d});
    const MatrixXd oracle = (a.inverse() + b.inverse()).inverse();
    CHECK((s - oracle).norm() <= 1e-10 * oracle.norm());
    CHECK((2 * s - harmonic_mean(a, b)).norm() <= 1e-10 * oracle.norm());
  }
}

TEST_CASE("positivity via schur") {
  MatrixXd id = MatrixXd::Identity(2, 2), r1(2, 2), ind(2, 2);
  r1 << 1, 1, 1, 1;
  ind << 1, 2, 2, 1;
  CHECK(positivity_via_schur(id, BlockPartition{1}).verdict ==
        Definiteness::PositiveDefinite);
  CHECK(positivity_via_schur(r1, BlockPartition{1}).verdict ==
        Definiteness::PositiveSemidefinite);
  CHECK(positivity_via_schur(ind, BlockPartition{1}).verdict ==
        Definiteness::Indefinite);
}

TEST_CASE("positivity via schur agrees with the spectrum on random matrices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(2, 6), kind(0, 2);
  int disagreements = 0;
  for (int t = 0; t < 10000; ++t) {
    const int d = dim(rng);
    MatrixXd h;
    switch (kind(rng)) {
      case 0: h = random_spd(rng, d); break;
      case 1: {
        // rank-deficient PSD
        const MatrixXd g = testsupport::gaussian_matrix(rng, d, d - 1);
        h = g * g.transpose();
        break;
      }
      default: h = testsupport::gaussian_matrix(rng, d, d); h = (h + h.transpose()) / 2;
    }
    std::uniform_int_distribution<int> split(1, d - 1);
    const auto res = positivity_via_schur(h, BlockPartition{split(rng)});
    if (!res.consistent()) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("hermitian schur complement on a complex matrix") {
  // [[2, i], [−i, 1]]: 1 − (−i)(1/2)(i) = 1 − 1/2
  ComplexPair<double> m(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2));
  m.re << 2, 0, 0, 1;
  m.im << 0, 1, -1, 0;
  const auto s = schur_complement(m, BlockPartition{1});
  CHECK(s.re(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(s.im(0, 0)) < 1e-15);
}

TEST_CASE("schur complement is the supremum") {
  CHECK(schur_is_supremum_check(MatrixXd::Identity(4, 4), BlockPartition{2}, 10));
  MatrixXd h(2, 2);
  h << 2, 1, 1, 1;
  MatrixXd b(2, 2);
  b << 0, 0, 0, 0.5;
  CHECK(std::abs(min_eig(h - b)) < 1e-14);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 5;
    CHECK(schur_is_supremum_check(random_spd(rng, d), BlockPartition{1 + t % (d - 1)},
                                  100, 100 + t));
  }
}

TEST_CASE("schur complement is monotone") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    const int d = 3 + t % 4;
    const MatrixXd h2 = random_spd(rng, d);
    const MatrixXd h1 = h2 + random_spd(rng, d, 1e-3, 1.0);
    const BlockPartition p{1 + t % (d - 1)};
    const MatrixXd diff = schur_complement(h1, p) - schur_complement(h2, p);
    CHECK(min_eig(diff) >= -1e-8 * h1.norm());
  }
}

TEST_CASE("mean examples") {
  const MatrixXd a = MatrixXd::Identity(2, 2);
  MatrixXd d1 = MatrixXd::Zero(2, 2), d2 = MatrixXd::Zero(2, 2);
  d1.diagonal() << 1, 4;
  d2.diagonal() << 4, 1;
  CHECK((geometric_mean(d1, d2) - 2 * a).norm() < 1e-14);
  CHECK((harmonic_mean(a, 3 * a) - 1.5 * a).norm() < 1e-14);
  std::mt19937_64 rng(23);
  const MatrixXd s = random_spd(rng, 4);
  CHECK((geometric_mean(s, s.inverse()) - MatrixXd::Identity(4, 4)).norm() < 1e-10);
  CHECK(mean_identity_residual(a, a) < 1e-15);
  MatrixXd one(1, 1), four(1, 1);
  one << 1;
  four << 4;
  CHECK(geometric_mean(one, four)(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(harmonic_mean(one, four)(0, 0) == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(mean_identity_residual(one, four) < 1e-14);
}

TEST_CASE("means reject non-positive input") {
  MatrixXd bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(geometric_mean(bad, MatrixXd::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(harmonic_mean(MatrixXd::Identity(2, 2), bad), DomainError);
}

TEST_CASE("mean properties on random pairs") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 8;
    const MatrixXd a = random_spd(rng, d), b = random_spd(rng, d);
    const double s = a.norm() + b.norm();
    const MatrixXd g = geometric_mean(a, b), h = harmonic_mean(a, b);
    // Löwner chain
    CHECK(min_eig(g - h) >= -1e-8 * s);
    CHECK(min_eig(arithmetic_mean(a, b) - g) >= -1e-8 * s);
    // identity between the three means
    CHECK(mean_identity_residual(a, b) <= 1e-8 * g.norm());
    // Riccati: (A#B) B⁻¹ (A#B) = A
    CHECK((g * b.inverse() * g - a).norm() <= 1e-8 * s);
    // congruence covariance
    const MatrixXd m = testsupport::gaussian_matrix(rng, d, d) +
                       2 * MatrixXd::Identity(d, d);
    const MatrixXd lhs = m * g * m.transpose();
    const MatrixXd rhs =
        geometric_mean(MatrixXd(m * a * m.transpose()), MatrixXd(m * b * m.transpose()));
    CHECK((lhs - rhs).norm() <= 1e-8 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("harmonic mean is jointly concave (spot check)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 4;
    const MatrixXd a1 = random_spd(rng, d), b1 = random_spd(rng, d);
    const MatrixXd a2 = random_spd(rng, d), b2 = random_spd(rng, d);
    const double w = u(rng);
    const MatrixXd mix = harmonic_mean(MatrixXd(w * a1 + (1 - w) * a2),
                                       MatrixXd(w * b1 + (1 - w) * b2));
    const MatrixXd sep = w * harmonic_mean(a1, b1) + (1 - w) * harmonic_mean(a2, b2);
    CHECK(min_eig(mix - sep) >= -1e-9 * mix.norm());
  }
}
