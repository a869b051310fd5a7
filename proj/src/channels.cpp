#include "locc/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace locc {
namespace {

CMatrix vector_choi(const std::vector<CMatrix>& kraus, int dim) {
  const StateVector phi = canonical_bell(dim);
  const CMatrix id = CMatrix::Identity(dim, dim);
  CMatrix out = CMatrix::Zero(phi.size(), phi.size());
  for (const auto& k : kraus) {
    const StateVector v = kron(k, id) * phi;
    out += v * v.adjoint();
  }
  return out;
}

// Choi state of sigma -> f(sigma) on a dim-level system, via matrix units.
template <typename Map>
CMatrix choi_of_map(Map&& f, int dim) {
  CMatrix out = CMatrix::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(i, j) = 1.0;
      out += kron(f(unit), unit) / static_cast<double>(dim);
    }
  return out;
}

CMatrix local_pair_density(const CMatrix& rho, int dim, const CMatrix& alice, const CMatrix& bob) {
  const std::array<int, 4> dims{dim, dim, dim, dim};
  const std::array<int, 4> split{0, 2, 1, 3};
  const CMatrix k = kron(alice, bob);
  const CMatrix grouped = permute_subsystems(rho, dims, split);
  return permute_subsystems(CMatrix(k * grouped * k.adjoint()), dims, split);
}

void validate_density(const CMatrix& rho, Eigen::Index dim, double eps) {
  if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorKind::InvalidState, "density matrix has the wrong shape");
  if (!rho.allFinite()) throw Error(ErrorKind::InvalidState, "density matrix has non-finite entries");
  if (!is_hermitian(rho, eps)) throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > eps) throw Error(ErrorKind::InvalidState, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(CMatrix((rho + rho.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -eps) throw Error(ErrorKind::InvalidState, "density matrix is not positive semidefinite");
}

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

void QChannel::validate(Tolerance tol) const {
  if (in_dim <= 0 || out_dim <= 0) throw Error(ErrorKind::InvalidChannel, "channel dimensions must be positive");
  if (kraus.empty()) throw Error(ErrorKind::InvalidChannel, "channel has no Kraus operators");
  CMatrix sum = CMatrix::Zero(in_dim, in_dim);
  for (const auto& k : kraus) {
    if (k.rows() != out_dim || k.cols() != in_dim) throw Error(ErrorKind::InvalidChannel, "Kraus operator has the wrong shape");
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, CMatrix::Identity(in_dim, in_dim)) > tol.eps) {
    throw Error(ErrorKind::InvalidChannel, "Kraus operators violate completeness");
  }
}

CMatrix QChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

QChannel identity_channel(int dim) { return QChannel{dim, dim, {CMatrix::Identity(dim, dim)}}; }

QChannel unitary_channel(const CMatrix& u) {
  const int d = static_cast<int>(u.rows());
  return QChannel{d, d, {u}};
}

QChannel dephasing_channel(int dim) {
  QChannel ch{dim, dim, {}};
  for (int k = 0; k < dim; ++k) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(k, k) = 1.0;
    ch.kraus.push_back(p);
  }
  return ch;
}

ChoiState choi(const QChannel& ch, Tolerance tol) {
  ch.validate(tol);
  if (ch.in_dim != ch.out_dim) throw Error(ErrorKind::InvalidChannel, "Choi state requires equal input and output dimensions");
  return ChoiState{vector_choi(ch.kraus, ch.in_dim), ch.in_dim, ch.out_dim};
}

CMatrix apply_from_choi(const ChoiState& j, const CMatrix& rho) {
  const std::array<int, 2> dims{j.out_dim, j.in_dim};
  const std::array<int, 1> keep{0};
  const CMatrix lifted = j.rho * kron(CMatrix::Identity(j.out_dim, j.out_dim), CMatrix(rho.transpose()));
  return static_cast<double>(j.in_dim) * partial_trace(lifted, dims, keep);
}

ChannelCheck channel_copy_verify(const std::vector<QChannel>& channels, const Unitary& encoder,
                                 const std::vector<CMatrix>& decoders, Tolerance tol) {
  if (channels.empty()) throw Error(ErrorKind::InvalidChannel, "no channels to copy");
  const int d = channels.front().in_dim;
  if (encoder.dim() != d * d) throw Error(ErrorKind::ShapeError, "encoder must act on two copies of the channel input");
  QChannel decoder{d * d, d * d, decoders};
  decoder.validate(tol);

  const CMatrix id = CMatrix::Identity(d, d);
  ChannelCheck check{true, 0.0};
  for (const auto& ch : channels) {
    ch.validate(tol);
    if (ch.in_dim != d || ch.out_dim != d || ch.kraus.size() != 1 || !is_unitary(ch.kraus.front(), tol.eps)) {
      throw Error(ErrorKind::InvalidChannel, "channel copying is verified for unitary channels of a common dimension");
    }
    const CMatrix& u = ch.kraus.front();
    std::vector<CMatrix> composed;
    for (const auto& b : decoders) composed.push_back(b * kron(u, id) * encoder.matrix());
    const double dist = max_abs_diff(vector_choi(composed, d * d), vector_choi({kron(u, u)}, d * d));
    check.distance = std::max(check.distance, dist);
  }
  check.passed = check.distance <= tol.eps;
  return check;
}

ChannelCopier channel_copier_from(const Unitary& copier) { return ChannelCopier{copier.adjoint(), {copier.matrix()}}; }

CMatrix correlation_operator(const MESet& set, const CMatrix& correlations) {
  if (correlations.rows() != set.size() || correlations.cols() != set.size()) {
    throw Error(ErrorKind::ShapeError, "correlation matrix must be N x N");
  }
  const int n = set.dim() * set.dim();
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.size(); ++j) out += correlations(i, j) * set.state(i) * set.state(j).adjoint();
  return out;
}

CMatrix maximally_correlated_state(const MESet& set, const CMatrix& correlations) {
  if (correlations.rows() != set.size() || correlations.cols() != set.size()) {
    throw Error(ErrorKind::ShapeError, "correlation matrix must be N x N");
  }
  std::vector<StateVector> doubled;
  for (int i = 0; i < set.size(); ++i) doubled.push_back(kron(set.state(i), set.state(i)));
  const Eigen::Index n = doubled.front().size();
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.size(); ++j) out += correlations(i, j) * doubled[i] * doubled[j].adjoint();
  return out;
}

DistillResult distill(const CMatrix& rho, const Unitary& copier, const CMatrix& anchor, Tolerance tol) {
  const int dim = static_cast<int>(anchor.rows());
  if (copier.dim() != dim * dim) throw Error(ErrorKind::ShapeError, "copier must act on D^2");
  validate_density(rho, static_cast<Eigen::Index>(dim) * dim * dim * dim, tol.eps);

  const CMatrix bob = bob_copier(copier.matrix(), anchor);
  const CMatrix out = local_pair_density(rho, dim, copier.matrix().adjoint(), bob.adjoint());

  const std::array<int, 4> dims{dim, dim, dim, dim};
  const std::array<int, 2> first{0, 1};
  const std::array<int, 2> second{2, 3};
  DistillResult r;
  r.residual = partial_trace(out, dims, first);
  const CMatrix target = partial_trace(out, dims, second);

  const StateVector anchor_state = kron(anchor, CMatrix::Identity(dim, dim)) * canonical_bell(dim);
  r.fidelity = anchor_state.dot(target * anchor_state).real();

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(CMatrix((target + target.adjoint()) / 2.0));
  StateVector top = solver.eigenvectors().col(solver.eigenvalues().size() - 1);
  const Complex overlap = top.dot(anchor_state);
  if (std::abs(overlap) > 0) top *= overlap / std::abs(overlap);
  r.extracted = top;
  return r;
}

DistillResult distill(const CMatrix& rho, const Unitary& copier, Tolerance tol) {
  const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(copier.dim()))));
  return distill(rho, copier, CMatrix::Identity(dim, dim), tol);
}

QChannel collective_channel(const CollectiveNoiseSpec& spec, Tolerance tol) {
  const int dim = spec.dim;
  if (dim < 2) throw Error(ErrorKind::InvalidSpec, "collective noise requires D >= 2");
  if (spec.labels.empty()) throw Error(ErrorKind::InvalidSpec, "collective noise needs at least one label");
  std::vector<CMatrix> pairs;
  for (const auto& l : spec.labels) {
    validate_label(dim, l);
    const CMatrix w = weyl_op(dim, l).matrix();
    pairs.push_back(kron(w, w));
  }

  QChannel ch{dim * dim, dim * dim, {}};
  if (spec.coefficients) {
    const CMatrix& c = *spec.coefficients;
    if (c.cols() != static_cast<Eigen::Index>(pairs.size()) || c.rows() == 0) {
      throw Error(ErrorKind::InvalidSpec, "coefficient matrix must have one column per label");
    }
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      CMatrix e = CMatrix::Zero(dim * dim, dim * dim);
      for (std::size_t i = 0; i < pairs.size(); ++i) e += c(k, static_cast<Eigen::Index>(i)) * pairs[i];
      ch.kraus.push_back(std::move(e));
    }
  } else {
    if (spec.probabilities.size() != pairs.size()) throw Error(ErrorKind::InvalidSpec, "one probability per label required");
    double total = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double p = spec.probabilities[k];
      if (!(p >= 0.0)) throw Error(ErrorKind::InvalidSpec, "probabilities must be non-negative");
      total += p;
      ch.kraus.push_back(std::sqrt(p) * pairs[k]);
    }
    if (std::abs(total - 1.0) > tol.eps) throw Error(ErrorKind::InvalidSpec, "probabilities must sum to 1");
  }
  try {
    ch.validate(tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidSpec, e.what());
  }
  return ch;
}

CMatrix default_ancilla(const CMatrix& basis) {
  const CVector v = basis.col(0);
  return v * v.adjoint();
}

ChannelCheck error_correct_verify(const QChannel& ch, const Unitary& encoder, const CMatrix& ancilla, Tolerance tol) {
  ch.validate(tol);
  const int dim = static_cast<int>(ancilla.rows());
  if (ch.in_dim != dim * dim || ch.out_dim != dim * dim || encoder.dim() != dim * dim) {
    throw Error(ErrorKind::ShapeError, "channel and encoder must act on two D-level registers");
  }
  const CMatrix& a = encoder.matrix();
  const std::array<int, 2> dims{dim, dim};
  const std::array<int, 1> keep{1};
  auto induced = [&](const CMatrix& sigma) {
    const CMatrix sent = a * kron(ancilla, sigma) * a.adjoint();
    const CMatrix decoded = a.adjoint() * ch.apply(sent) * a;
    return partial_trace(decoded, dims, keep);
  };
  const CMatrix got = choi_of_map(induced, dim);
  const StateVector phi = canonical_bell(dim);
  const double dist = max_abs_diff(got, phi * phi.adjoint());
  return ChannelCheck{dist <= tol.eps, dist};
}

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter) {
  // SplitMix64 finalizer applied to the counter-th element of the Weyl sequence.
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

QKDReport qkd_simulate(const QChannel& ch, std::uint64_t rounds, std::uint64_t seed) {
  if (rounds == 0) throw Error(ErrorKind::EmptyReport, "at least one round is required");
  ch.validate();
  if (ch.in_dim != 4 || ch.out_dim != 4) throw Error(ErrorKind::InvalidChannel, "QKD runs on a pair of qubits (dimension 4)");

  const double r = 1.0 / std::sqrt(2.0);
  auto ket = [](std::initializer_list<double> amps) {
    CVector v(4);
    int i = 0;
    for (double a : amps) v[i++] = a;
    return v;
  };
  // Alice's signals, [basis][bit].
  const std::array<std::array<CVector, 2>, 2> signals{{
      {ket({1, 0, 0, 0}), ket({0, 0, 0, 1})},
      {ket({r, 0, 0, r}), ket({r, 0, 0, -r})},
  }};
  CMatrix proj0 = CMatrix::Zero(2, 2);
  proj0(0, 0) = 1.0;
  const CMatrix z0 = kron(CMatrix::Identity(2, 2), proj0);
  const CVector phi_plus = ket({r, 0, 0, r});
  const CVector psi_plus = ket({0, r, r, 0});
  const CMatrix bell0 = phi_plus * phi_plus.adjoint() + psi_plus * psi_plus.adjoint();
  // First POVM element of Bob's measurement for each basis; the second is its complement.
  const std::array<CMatrix, 2> first_element{z0, bell0};

  std::array<std::array<double, 2>, 2> p_zero{};
  for (int b = 0; b < 2; ++b)
    for (int bit = 0; bit < 2; ++bit) {
      const CMatrix received = ch.apply(signals[b][bit] * signals[b][bit].adjoint());
      p_zero[b][bit] = std::clamp((first_element[b] * received).trace().real(), 0.0, 1.0);
    }

  QKDReport rep;
  rep.rounds = rounds;
  rep.seed = seed;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    const std::uint64_t base = 4 * i;
    const int alice_basis = static_cast<int>(counter_random(seed, base) >> 63);
    const int bit = static_cast<int>(counter_random(seed, base + 1) >> 63);
    const int bob_basis = static_cast<int>(counter_random(seed, base + 2) >> 63);
    if (alice_basis != bob_basis) continue;
    ++rep.sifted;
    const int outcome = uniform01(counter_random(seed, base + 3)) < p_zero[bob_basis][bit] ? 0 : 1;
    if (outcome != bit) ++rep.errors;
  }
  rep.qber = rep.sifted == 0 ? 0.0 : static_cast<double>(rep.errors) / static_cast<double>(rep.sifted);
  return rep;
}

QChannel single_register_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidSpec, "flip probability must lie in [0, 1]");
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return QChannel{4, 4, {std::sqrt(1.0 - p) * kron(id, id), std::sqrt(p) * kron(id, x)}};
}

}  // namespace locc
