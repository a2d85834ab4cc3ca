#include <cmath>
#include <random>

#include "gaussep/passive.hpp"
#include "gaussep/symplectic.hpp"

namespace gaussep {

QCM random_qcm(std::uint64_t seed, ModeLayout layout, Purity purity,
               double squeeze_max) {
  layout.validate();
  if (squeeze_max < 0) throw DomainError("random_qcm: squeeze_max < 0");
  if (!purity.pure && purity.nu_max < 1.0)
    throw DomainError("random_qcm: ν_max must be ≥ 1");
  const int k = layout.modes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Eigen::MatrixXd k1 =
      passive_from_unitary(haar_unitary(rng, k)).modewise();
  const Eigen::MatrixXd k2 =
      passive_from_unitary(haar_unitary(rng, k)).modewise();
  Eigen::VectorXd z(2 * k), d(2 * k);
  for (int j = 0; j < k; ++j) {
    const double r = squeeze_max * unit(rng);
    z(2 * j) = std::exp(-r);
    z(2 * j + 1) = std::exp(r);
    const double nu =
        purity.pure ? 1.0 : 1.0 + (purity.nu_max - 1.0) * unit(rng);
    d(2 * j) = d(2 * j + 1) = nu;
  }
  const Eigen::MatrixXd s = k1 * z.asDiagonal() * k2;
  QCM v(layout.with_ordering(Ordering::ModeWise),
        s * d.asDiagonal() * s.transpose());
  return reorder(v, layout.ordering);
}

}  // namespace gaussep
