#include "locc/weyl.hpp"

#include <cmath>
#include <string>

namespace locc {
namespace {

void require_dim(int dim) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "D must be at least 2, got " + std::to_string(dim));
}

}  // namespace

void validate_label(int dim, const WeylLabel& label) {
  if (label.n < 0 || label.n >= dim || label.m < 0 || label.m >= dim) {
    throw Error(ErrorKind::InvalidSpec, "label (" + std::to_string(label.n) + ", " + std::to_string(label.m) +
                                            ") out of range for D = " + std::to_string(dim));
  }
}

Unitary pauli_z(int dim) {
  require_dim(dim);
  CMatrix z = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) z(k, k) = omega(dim, k);
  return Unitary(std::move(z));
}

Unitary pauli_x(int dim) {
  require_dim(dim);
  CMatrix x = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) x(k, mod(k + 1, dim)) = 1.0;
  return Unitary(std::move(x));
}

Unitary weyl_op(int dim, const WeylLabel& label) {
  require_dim(dim);
  validate_label(dim, label);
  // (Z^n X^m)|k> = w^{n (k - m)} |k - m>
  CMatrix w = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const int target = mod(k - label.m, dim);
    w(target, k) = omega(dim, static_cast<long long>(label.n) * target);
  }
  return Unitary(std::move(w));
}

StateVector canonical_bell(int dim) {
  require_dim(dim);
  StateVector v = StateVector::Zero(dim * dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) v[k * dim + k] = amp;
  return v;
}

StateVector bell_state(int dim, const BellIndex& idx) {
  const CMatrix op = kron(weyl_op(dim, idx).matrix(), CMatrix::Identity(dim, dim));
  return op * canonical_bell(dim);
}

Unitary gen_cnot(int dim) {
  require_dim(dim);
  const int n = dim * dim;
  CMatrix a = CMatrix::Zero(n, n);
  for (int x = 0; x < dim; ++x)
    for (int y = 0; y < dim; ++y) a(mod(x - y, dim) * dim + y, x * dim + y) = 1.0;
  return Unitary(std::move(a));
}

std::vector<WeylLabel> all_labels(int dim) {
  std::vector<WeylLabel> out;
  out.reserve(static_cast<std::size_t>(dim) * dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) out.push_back({n, m});
  return out;
}

}  // namespace locc
