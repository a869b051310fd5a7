#pragma once

// Channel-level uses of the copier A: Choi duality, one-way channel copying,
// distillation of maximally correlated states, collective-noise error
// correction and the encoded BB84 simulation built on it.

#include <cstdint>
#include <optional>
#include <vector>

#include "locc/algebra.hpp"
#include "locc/copying.hpp"
#include "locc/weyl.hpp"

namespace locc {

/// CPTP map rho -> sum_k K_k rho K_k^dag.
struct QChannel {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<CMatrix> kraus;

  /// Throws InvalidChannel on shape errors or when sum K^dag K != I.
  void validate(Tolerance tol = {}) const;
  CMatrix apply(const CMatrix& rho) const;
};

QChannel identity_channel(int dim);
QChannel unitary_channel(const CMatrix& u);
/// Kraus operators |k><k|.
QChannel dephasing_channel(int dim);

/// (Lambda (x) I)(|Psi_00><Psi_00|), ordered (output, reference).
struct ChoiState {
  CMatrix rho;
  int in_dim = 0;
  int out_dim = 0;
};

ChoiState choi(const QChannel& ch, Tolerance tol = {});

/// Inverse of the Choi map: Lambda(rho) = d_in Tr_ref[J (I (x) rho^T)].
CMatrix apply_from_choi(const ChoiState& j, const CMatrix& rho);

struct ChannelCheck {
  bool passed = false;
  double distance = 0.0;
};

/// Checks that encoder, channel i on register 1 with an identity blank on
/// register 2, and the decoders compose to Lambda_i (x) Lambda_i for every
/// channel, comparing Choi states. Channels must be unitary.
ChannelCheck channel_copy_verify(const std::vector<QChannel>& channels, const Unitary& encoder,
                                 const std::vector<CMatrix>& decoders, Tolerance tol = {});

/// Encoder and decoder that turn a state copier A into a channel copier:
/// the composite is A (U (x) I) A^dag, so the encoder is A^dag and the single
/// decoder is A.
struct ChannelCopier {
  Unitary encoder;
  std::vector<CMatrix> decoders;
};
ChannelCopier channel_copier_from(const Unitary& copier);

/// sum_ij a_ij |Psi_i>|Psi_i><Psi_j|<Psi_j| on registers (1,2,3,4).
CMatrix maximally_correlated_state(const MESet& set, const CMatrix& correlations);

/// sum_ij a_ij |Psi_i><Psi_j| on registers (1,2).
CMatrix correlation_operator(const MESet& set, const CMatrix& correlations);

struct DistillResult {
  CMatrix residual;      // registers (1,2)
  StateVector extracted;  // registers (3,4), dominant eigenvector
  double fidelity = 0.0;  // <anchor| rho_34 |anchor>
};

/// Runs the copy protocol backwards: A^dag on (1,3) and the inverse of Bob's
/// copier half on (2,4). `anchor` is U_0 of the underlying set (identity
/// for sets anchored at |Psi_00>). Throws InvalidState unless rho is a
/// density matrix on D^4.
DistillResult distill(const CMatrix& rho, const Unitary& copier, const CMatrix& anchor, Tolerance tol = {});
DistillResult distill(const CMatrix& rho, const Unitary& copier, Tolerance tol = {});

/// Collective noise E_k = sqrt(p_k) W_k (x) W_k, or E_k = sum_i c_ki W_i (x) W_i
/// when a coefficient matrix is given.
struct CollectiveNoiseSpec {
  int dim = 0;
  std::vector<WeylLabel> labels;
  std::vector<double> probabilities;
  std::optional<CMatrix> coefficients;
};

/// Throws InvalidSpec when the weights do not yield a trace-preserving map.
QChannel collective_channel(const CollectiveNoiseSpec& spec, Tolerance tol = {});

/// V |0><0| V^dag.
CMatrix default_ancilla(const CMatrix& basis);

/// Compares the induced map sigma -> Tr_1 A^dag Lambda(A (sigma0 (x) sigma) A^dag) A
/// with the identity channel through their Choi states.
ChannelCheck error_correct_verify(const QChannel& ch, const Unitary& encoder, const CMatrix& ancilla, Tolerance tol = {});

struct QKDReport {
  std::uint64_t rounds = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double qber = 0.0;
  std::uint64_t seed = 0;

  double sift_fraction() const { return rounds == 0 ? 0.0 : static_cast<double>(sifted) / static_cast<double>(rounds); }
};

/// Counter-based 64-bit generator output for (seed, counter).
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter);

/// Encoded BB84 over a two-qubit channel. Alice sends |bb> or
/// (|00> +- |11>)/sqrt2; Bob measures register 2 in Z, or the Bell-pair POVM.
/// Deterministic in (seed, rounds). Throws EmptyReport for zero rounds.
QKDReport qkd_simulate(const QChannel& ch, std::uint64_t rounds, std::uint64_t seed);

/// sqrt(1-p) I (x) I, sqrt(p) I (x) X: a flip on the data register only.
QChannel single_register_flip(double p);

}  // namespace locc
