#pragma once

// Simultaneous Schmidt decomposition (SSD), the one-way LOCC instrument that
// moves an SSD set onto Bob's side, and the copiable / SSD / undetermined
// classification of prime-dimensional sets.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "locc/algebra.hpp"
#include "locc/copying.hpp"
#include "locc/weyl.hpp"

namespace locc {

/// |Psi_alpha> = sum_k coeffs(alpha, k) |e_k>|f_k> for every member.
struct SchmidtWitness {
  int dim = 0;
  CMatrix e_basis;  // columns |e_k>
  CMatrix f_basis;  // columns |f_k>
  CMatrix coeffs;   // N x D
};

enum class Tier { LocallyCopiable, SSDNotCopiable, NotSSD_LDUndetermined, TooLargeForLD };
std::string to_string(Tier t);

/// Kraus operators F_k on A (x) B1 (x) B2, indexed by Alice's outcome k.
struct Instrument {
  int dim = 0;
  std::vector<CMatrix> kraus;
};

struct DiscriminationResult {
  int identified = -1;
  std::vector<double> distribution;  // probability of each member label
  std::vector<double> outcome_probabilities;  // Alice's outcome k
};

struct Classification {
  Tier tier = Tier::NotSSD_LDUndetermined;
  CopyDecision copy;
  std::optional<SchmidtWitness> schmidt;
  bool cyclic = false;
};

using SsdCertificate = std::array<int, 3>;  // (p, q, r)

/// Exhaustive search for (p, q) != (0, 0) and r with p n + q m = r (mod D)
/// on every index. Throws UnsupportedDimension for composite D.
std::optional<SsdCertificate> ssd_check_bell(int dim, const std::vector<BellIndex>& indices);

bool certificate_holds(int dim, const std::vector<BellIndex>& indices, const SsdCertificate& cert);

/// SSD test for maximally entangled members: the right-normalized unitaries
/// must commute. Returns the Schmidt bases and coefficients when they do.
std::optional<SchmidtWitness> ssd_check_mes(const MESet& set);

/// max_alpha || |Psi_alpha> - sum_k b_k |e_k>|f_k> ||.
double schmidt_residual(const MESet& set, const SchmidtWitness& witness);

/// True when, up to member phases and renumbering, the right-normalized set
/// sits inside the cyclic group generated by one member g with g^D = I.
bool canonical_cyclic_check(const MESet& set);

/// Throws InvalidWitness when the bases are not unitary or the shapes are off.
Instrument build_instrument(const SchmidtWitness& witness, int dim);

/// max-abs deviation of sum_k F_k^dag F_k from the identity.
double completeness_error(const Instrument& inst);

/// Runs the instrument on |Psi_secret>_{A B1} (x) |0>_{B2} and measures
/// B1 B2 in the set's own orthonormal family. Throws NotApplicable when the
/// witness does not decompose the set and ProtocolMismatch when the winning
/// probability is below 1 - 1e-9.
DiscriminationResult execute_discrimination(const MESet& set, const SchmidtWitness& witness, int secret);

Tier classify_set(const MESet& set);
Classification classify_set_detailed(const MESet& set);

/// Builds an MESet from Bell indices.
MESet bell_set(int dim, const std::vector<BellIndex>& indices, Tolerance tol = {});

}  // namespace locc
