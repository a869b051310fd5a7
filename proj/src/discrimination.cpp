#include "locc/discrimination.hpp"

#include <algorithm>
#include <cmath>

namespace locc {
namespace {

constexpr double kProportionalTolerance = 1e-7;
constexpr double kWitnessTolerance = 1e-7;
constexpr double kDeterministic = 1.0 - 1e-9;

// Unit phase c with m ~= c * ref, when one exists.
std::optional<Complex> proportional(const CMatrix& m, const CMatrix& ref) {
  const Complex c = (ref.adjoint() * m).trace() / static_cast<double>(m.rows());
  if (std::abs(std::abs(c) - 1.0) > kProportionalTolerance) return std::nullopt;
  const Complex phase = c / std::abs(c);
  if (max_abs_diff(m, phase * ref) > kProportionalTolerance) return std::nullopt;
  return phase;
}

void require_prime(int dim) {
  if (!is_prime(dim)) throw Error(ErrorKind::UnsupportedDimension, "prime D required, got " + std::to_string(dim));
}

}  // namespace

std::string to_string(Tier t) {
  switch (t) {
    case Tier::LocallyCopiable: return "LocallyCopiable";
    case Tier::SSDNotCopiable: return "SSDNotCopiable";
    case Tier::NotSSD_LDUndetermined: return "NotSSD_LDUndetermined";
    case Tier::TooLargeForLD: return "TooLargeForLD";
  }
  return "Unknown";
}

bool certificate_holds(int dim, const std::vector<BellIndex>& indices, const SsdCertificate& cert) {
  const auto [p, q, r] = cert;
  if (mod(p, dim) == 0 && mod(q, dim) == 0) return false;
  return std::all_of(indices.begin(), indices.end(), [&](const BellIndex& i) {
    return mod(static_cast<long long>(p) * i.n + static_cast<long long>(q) * i.m - r, dim) == 0;
  });
}

std::optional<SsdCertificate> ssd_check_bell(int dim, const std::vector<BellIndex>& indices) {
  require_prime(dim);
  for (const auto& i : indices) validate_label(dim, i);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) {
      if (p == 0 && q == 0) continue;
      for (int r = 0; r < dim; ++r) {
        const SsdCertificate cert{p, q, r};
        if (certificate_holds(dim, indices, cert)) return cert;
      }
    }
  return std::nullopt;
}

std::optional<SchmidtWitness> ssd_check_mes(const MESet& set) {
  const int dim = set.dim();
  const auto members = set.right_normalized();
  CommonEigenbasis common;
  try {
    common = simultaneous_diagonalize(members, set.tolerance());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotSimultaneouslyDiagonalizable) throw;
    return std::nullopt;
  }
  SchmidtWitness w;
  w.dim = dim;
  w.e_basis = common.basis;
  // (W (x) U_0^T)|Psi_00> with |Psi_00> = D^{-1/2} sum_k |v_k>|conj v_k>.
  w.f_basis = set[0].matrix().transpose() * common.basis.conjugate();
  w.coeffs.resize(set.size(), dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int a = 0; a < set.size(); ++a) w.coeffs.row(a) = common.diagonals[a].transpose() * norm;
  return w;
}

double schmidt_residual(const MESet& set, const SchmidtWitness& witness) {
  if (witness.coeffs.rows() != set.size() || witness.coeffs.cols() != set.dim()) {
    throw Error(ErrorKind::InvalidWitness, "coefficient matrix shape differs from N x D");
  }
  double worst = 0.0;
  for (int a = 0; a < set.size(); ++a) {
    StateVector rebuilt = StateVector::Zero(set.dim() * set.dim());
    for (int k = 0; k < set.dim(); ++k) {
      rebuilt += witness.coeffs(a, k) * kron(CVector(witness.e_basis.col(k)), CVector(witness.f_basis.col(k)));
    }
    worst = std::max(worst, (set.state(a) - rebuilt).norm());
  }
  return worst;
}

bool canonical_cyclic_check(const MESet& set) {
  require_prime(set.dim());
  const int dim = set.dim();
  const auto members = set.right_normalized();
  const CMatrix id = CMatrix::Identity(dim, dim);

  std::vector<int> generators;
  for (int j = 0; j < set.size(); ++j)
    if (!proportional(members[j], id)) generators.push_back(j);
  if (generators.empty()) return true;

  for (int g : generators) {
    std::vector<CMatrix> powers{id};
    for (int s = 1; s <= dim; ++s) powers.push_back(powers.back() * members[g]);
    if (!proportional(powers[dim], id)) continue;
    const bool contained = std::all_of(members.begin(), members.end(), [&](const CMatrix& w) {
      return std::any_of(powers.begin(), powers.begin() + dim, [&](const CMatrix& p) { return proportional(w, p).has_value(); });
    });
    if (contained) return true;
  }
  return false;
}

Instrument build_instrument(const SchmidtWitness& witness, int dim) {
  if (witness.dim != dim || witness.e_basis.rows() != dim || witness.e_basis.cols() != dim || witness.f_basis.rows() != dim ||
      witness.f_basis.cols() != dim) {
    throw Error(ErrorKind::InvalidWitness, "Schmidt bases must be D x D");
  }
  if (!is_unitary(witness.e_basis, 1e-8) || !is_unitary(witness.f_basis, 1e-8)) {
    throw Error(ErrorKind::InvalidWitness, "Schmidt bases are not orthonormal");
  }
  const CMatrix& e = witness.e_basis;
  const CMatrix& f = witness.f_basis;
  const CMatrix id = CMatrix::Identity(dim, dim);

  // |e_k> (x) |f_{k+l}> <f_k| (x) <l| on B1 B2.
  CMatrix cnot = CMatrix::Zero(dim * dim, dim * dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      CVector basis_l = CVector::Zero(dim);
      basis_l[l] = 1.0;
      cnot += kron(CVector(e.col(k)), CVector(f.col(mod(k + l, dim)))) * kron(CVector(f.col(k)), basis_l).adjoint();
    }
  const CMatrix cnot_full = kron(id, cnot);

  Instrument inst{dim, {}};
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) {
    CVector fourier = CVector::Zero(dim);
    CVector phases(dim);
    for (int i = 0; i < dim; ++i) {
      phases[i] = omega(dim, static_cast<long long>(k) * i);
      fourier += phases[i] * norm * e.col(i);
    }
    const CMatrix projector = fourier * fourier.adjoint();
    const CMatrix correction = f * phases.asDiagonal() * f.adjoint();
    const CMatrix step_p = kron(projector, CMatrix::Identity(dim * dim, dim * dim));
    const CMatrix step_u = kron(kron(id, correction), id);
    inst.kraus.push_back(cnot_full * step_u * step_p);
  }
  return inst;
}

double completeness_error(const Instrument& inst) {
  const Eigen::Index n = inst.kraus.front().cols();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& k : inst.kraus) sum += k.adjoint() * k;
  return max_abs_diff(sum, CMatrix::Identity(n, n));
}

DiscriminationResult execute_discrimination(const MESet& set, const SchmidtWitness& witness, int secret) {
  const int dim = set.dim();
  if (secret < 0 || secret >= set.size()) throw Error(ErrorKind::ShapeError, "secret index out of range");
  if (schmidt_residual(set, witness) > kWitnessTolerance) {
    throw Error(ErrorKind::NotApplicable, "witness does not simultaneously Schmidt-decompose the set");
  }
  const Instrument inst = build_instrument(witness, dim);
  CVector ancilla = CVector::Zero(dim);
  ancilla[0] = 1.0;
  const StateVector input = kron(set.state(secret), ancilla);

  const int bob = dim * dim;
  DiscriminationResult result;
  result.distribution.assign(set.size(), 0.0);
  for (const auto& f : inst.kraus) {
    const StateVector out = f * input;
    result.outcome_probabilities.push_back(out.squaredNorm());
    // Rows: Alice's register, columns: Bob's (B1 B2) pair.
    CMatrix split(dim, bob);
    for (int a = 0; a < dim; ++a) split.row(a) = out.segment(a * bob, bob).transpose();
    for (int alpha = 0; alpha < set.size(); ++alpha) {
      result.distribution[alpha] += (split * set.state(alpha).conjugate()).squaredNorm();
    }
  }
  const auto best = std::max_element(result.distribution.begin(), result.distribution.end());
  if (*best < kDeterministic) {
    throw Error(ErrorKind::ProtocolMismatch, "no member identified with probability >= 1 - 1e-9 (best " + std::to_string(*best) + ")");
  }
  result.identified = static_cast<int>(best - result.distribution.begin());
  return result;
}

Classification classify_set_detailed(const MESet& set) {
  require_prime(set.dim());
  Classification c;
  c.copy = copiable_set_prime(set);
  c.schmidt = ssd_check_mes(set);
  c.cyclic = canonical_cyclic_check(set);
  if (set.size() > set.dim()) {
    c.tier = Tier::TooLargeForLD;
  } else if (c.copy.copiable) {
    c.tier = Tier::LocallyCopiable;
  } else if (c.schmidt) {
    c.tier = Tier::SSDNotCopiable;
  } else {
    c.tier = Tier::NotSSD_LDUndetermined;
  }
  return c;
}

Tier classify_set(const MESet& set) { return classify_set_detailed(set).tier; }

MESet bell_set(int dim, const std::vector<BellIndex>& indices, Tolerance tol) {
  std::vector<Unitary> us;
  us.reserve(indices.size());
  for (const auto& i : indices) us.push_back(weyl_op(dim, i));
  return MESet(dim, std::move(us), tol);
}

}  // namespace locc
