#include "locc/random.hpp"

#include <Eigen/QR>

namespace locc {
namespace {

CMatrix ginibre(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

}  // namespace

Unitary random_unitary(int dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return Unitary(std::move(q));
}

CMatrix random_density(int dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace locc
