#pragma once

// Local copying of orthogonal maximally entangled states.
//
// A set member j is the state (U_j (x) I)|Psi_00>. Alice holds registers 1
// and 3, Bob holds 2 and 4; the unknown member sits on (1,2) and the blank
// on (3,4). A copier is a unitary A on (1,3) with A (U (x) I) A^dag = U (x) U
// for every member (after right-normalizing by U_0); the LOCC copy
// operation is then A on Alice's side and the entrywise conjugate of A on
// Bob's side.

#include <optional>
#include <string>
#include <vector>

#include "locc/algebra.hpp"

namespace locc {

/// An orthogonal set of maximally entangled states given by unitaries.
class MESet {
 public:
  /// Throws ShapeError on mixed dimensions and ValidationError when two
  /// members are not trace-orthogonal (|Tr U_i^dag U_j| > D eps).
  MESet(int dim, std::vector<Unitary> unitaries, Tolerance tol = {});

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(unitaries_.size()); }
  const std::vector<Unitary>& unitaries() const { return unitaries_; }
  const Unitary& operator[](int j) const { return unitaries_.at(j); }
  Tolerance tolerance() const { return tol_; }

  /// (U_j (x) I)|Psi_00>.
  StateVector state(int j) const;

  /// U_j U_0^dag for every member; the first entry is the identity.
  std::vector<CMatrix> right_normalized() const;

 private:
  int dim_;
  std::vector<Unitary> unitaries_;
  Tolerance tol_;
};

enum class CopyFailure { TooMany, NonCommuting, SpectrumNotRootsOfUnity, NoLinearLabeling };
std::string to_string(CopyFailure f);

/// Certificate that the right-normalized members are
/// phases[j] * basis * diag(w^{exponents[j] * k}) * basis^dag.
struct CopyWitness {
  int dim = 0;
  CMatrix basis;
  std::vector<int> exponents;
  std::vector<Complex> phases;
};

struct CopyDecision {
  bool copiable = false;
  std::optional<CopyWitness> witness;
  std::optional<CopyFailure> failure;
  std::string detail;
};

struct PairVerdict {
  bool copiable = false;
  int order = 0;  // M, when copiable
  std::string diagnostic;
};

bool is_prime(int n);

/// || A (U (x) I) A^dag - U (x) U || <= eps.
bool check_intertwine(const Unitary& copier, const Unitary& u, Tolerance tol = {});

/// Two-member criterion: after removing one global phase the spectrum of T is
/// exactly the group of M-th roots of unity for some M | D, every root with
/// the same multiplicity D / M.
PairVerdict copiable_pair(const Unitary& t, int dim, Tolerance tol = {});

/// Independent check of the same question: T (x) I and e^{i theta} T (x) T
/// have equal eigenvalue multisets for some global phase theta.
bool spectral_similarity_oracle(const Unitary& t, int dim);

/// Decides local copiability of a set in prime dimension and builds the
/// witness. Throws UnsupportedDimension for composite D.
CopyDecision copiable_set_prime(const MESet& set);

/// Largest deviation of the witness reconstruction from the right-normalized
/// members.
double witness_residual(const MESet& set, const CopyWitness& witness);

/// (V (x) V) CNOT (V (x) V)^dag.
Unitary build_copier(const CopyWitness& witness);

/// Runs the four-register copy protocol on member j with the set's anchor
/// state as blank. Output is ordered (1,2,3,4). Throws ProtocolMismatch when
/// the copier does not intertwine every right-normalized member up to a
/// global phase.
StateVector execute_copy(const MESet& set, int j, const Unitary& copier);

/// |<Psi_j (x) Psi_j | out>|^2.
double copy_fidelity(const MESet& set, int j, const StateVector& out);

/// Bob's half of the copy operation for a set anchored at U_0:
/// (U_0^T (x) U_0^T) conj(A) (conj(U_0) (x) conj(U_0)).
CMatrix bob_copier(const CMatrix& copier, const CMatrix& anchor);

/// Applies L on registers (1,3) and R on registers (2,4) of a (1,2,3,4)
/// ordered vector of four D-level registers.
StateVector apply_local_pair(const StateVector& psi, int dim, const CMatrix& alice, const CMatrix& bob);

/// Copier matrices A that map |a> (x) H into span{|k>|l> : k + l = a}.
/// Throws StructureViolation otherwise.
void check_copier_structure(const CMatrix& copier, int dim, double eps);

/// Random copier with the block structure above: independent random unitary
/// blocks xi^a. `seed` drives a deterministic generator.
Unitary random_structured_copier(int dim, unsigned long long seed);

struct NullspaceScan {
  std::vector<CMatrix> basis;
  bool all_diagonal = false;
  double max_offdiagonal = 0.0;
};

/// Solves the linear exchange-symmetry system implied by
///   <a1 b1| A (U (x) I) A^dag |a2 b2> = U_{a1 a2} U_{b1 b2}
/// (the right-hand side is symmetric under (a1,a2) <-> (b1,b2), so the left
/// must be too) for the D^2 unknown entries of U and returns a basis of the
/// solution space, each element flagged diagonal or not at 1e-8.
NullspaceScan lemma_nullspace_scan(const Unitary& copier, int dim, Tolerance tol = {});

}  // namespace locc
