#pragma once

// Shared inputs for the unit tests and the acceptance run.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "locc/algebra.hpp"
#include "locc/copying.hpp"
#include "locc/random.hpp"
#include "locc/weyl.hpp"

namespace fixtures {

using locc::CMatrix;
using locc::Complex;
using locc::CVector;

inline CMatrix diag_of(const std::vector<Complex>& entries) {
  CVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i];
  return v.asDiagonal();
}

inline CMatrix power(const CMatrix& m, int k) {
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out *= m;
  return out;
}

// diag(1, -1, i, e^{-i pi/6}, e^{i 7 pi/6}): traceless, spectrum off every
// fifth-root lattice.
inline CMatrix lattice_breaker() {
  using locc::kPi;
  return diag_of({1.0, -1.0, Complex(0, 1), std::polar(1.0, -kPi / 6), std::polar(1.0, 7 * kPi / 6)});
}

inline locc::MESet z_powers(int d, const std::vector<int>& js) {
  std::vector<locc::Unitary> us;
  for (int j : js) us.emplace_back(power(locc::pauli_z(d).matrix(), j));
  return locc::MESet(d, us);
}

struct PairCandidate {
  locc::Unitary t;
  std::optional<bool> expected;  // known answer when the construction fixes it
};

// Mix of Haar unitaries and conjugated diagonal constructions: the full root
// group (copiable), repeated roots (copiable iff all distinct or all equal),
// a nudged root group (not copiable) and roots of order 4D.
inline PairCandidate pair_candidate(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 4), exponent(0, 4 * d - 1);
  std::uniform_real_distribution<double> angle(0.0, 2 * locc::kPi);
  const CMatrix h = locc::random_unitary(d, rng).matrix();
  const Complex phase = std::polar(1.0, angle(rng));
  std::vector<Complex> eig(d);
  std::optional<bool> expected;
  switch (kind(rng)) {
    case 0:
      return {locc::Unitary(h), std::nullopt};
    case 1: {
      std::vector<int> perm(d);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < d; ++i) eig[i] = phase * locc::omega(d, perm[i]);
      expected = true;
      break;
    }
    case 2: {
      std::vector<int> e(d);
      for (int i = 0; i < d; ++i) e[i] = exponent(rng) % d;
      for (int i = 0; i < d; ++i) eig[i] = phase * locc::omega(d, e[i]);
      std::sort(e.begin(), e.end());
      expected = std::adjacent_find(e.begin(), e.end()) == e.end() || e.front() == e.back();
      break;
    }
    case 3:
      for (int i = 0; i < d; ++i) eig[i] = phase * locc::omega(d, i);
      eig[0] *= std::polar(1.0, 1e-3);
      expected = false;
      break;
    default:
      for (int i = 0; i < d; ++i) eig[i] = phase * locc::omega(4 * d, exponent(rng));
  }
  return {locc::Unitary(h * diag_of(eig) * h.adjoint(), locc::Tolerance{1e-8}), expected};
}

}  // namespace fixtures
