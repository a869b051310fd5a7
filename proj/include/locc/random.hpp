#pragma once

#include <random>

#include "locc/algebra.hpp"

namespace locc {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded into Q.
Unitary random_unitary(int dim, std::mt19937_64& rng);

/// Random density matrix G G^dag / Tr(G G^dag) with G complex Gaussian.
CMatrix random_density(int dim, std::mt19937_64& rng);

}  // namespace locc
