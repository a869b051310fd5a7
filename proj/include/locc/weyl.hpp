#pragma once

// Generalized Pauli (Weyl-Heisenberg) operators on a D-level system.
//
// Conventions used everywhere in the library:
//   Z|k> = w^k |k>,          w = exp(2 pi i / D)
//   X|k> = |k - 1 mod D>     (X = sum_k |k><k+1|)
// so that X Z = w Z X.  Bell states are |Psi_nm> = (Z^n X^m (x) I)|Psi_00>
// with the normalized |Psi_00> = D^{-1/2} sum_k |k>|k>.

#include <vector>

#include "locc/algebra.hpp"

namespace locc {

/// Label (n, m) of the Weyl operator Z^n X^m, or of the Bell state it
/// prepares from |Psi_00>.
struct WeylLabel {
  int n = 0;
  int m = 0;

  friend bool operator==(const WeylLabel&, const WeylLabel&) = default;
};
using BellIndex = WeylLabel;

/// Throws InvalidSpec unless 0 <= n, m < D.
void validate_label(int dim, const WeylLabel& label);

Unitary pauli_z(int dim);
Unitary pauli_x(int dim);
Unitary weyl_op(int dim, const WeylLabel& label);

/// D^{-1/2} sum_k |k>|k>.
StateVector canonical_bell(int dim);
StateVector bell_state(int dim, const BellIndex& idx);

/// |a>|b> -> |a - b>|b>; the first (subtracted) register is the target.
Unitary gen_cnot(int dim);

/// All D^2 labels in row-major (n, m) order.
std::vector<WeylLabel> all_labels(int dim);

}  // namespace locc
