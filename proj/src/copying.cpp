#include "locc/copying.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "locc/random.hpp"
#include "locc/weyl.hpp"

namespace locc {
namespace {

// Eigenvalue-to-lattice matching is done in angle, with a window far below
// the lattice spacing 2 pi / D.
double lattice_tolerance(int dim) { return 1e-6 * 2.0 * kPi / dim; }

constexpr double kMultisetTolerance = 1e-7;
constexpr double kDiagonalTolerance = 1e-8;

// Nearest lattice exponent of a unit complex on the M-th roots, or -1 when
// the value is off the lattice.
int lattice_exponent(Complex z, int order, int dim) {
  const double angle = phase_angle(z);
  const int k = mod(std::llround(angle * order / (2.0 * kPi)), order);
  if (angle_distance(angle, 2.0 * kPi * k / order) >= lattice_tolerance(dim)) return -1;
  return k;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int m = 1; m <= n; ++m)
    if (n % m == 0) out.push_back(m);
  return out;
}

bool multisets_match(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && std::abs(x - b[i]) < kMultisetTolerance) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Complex> eigenvalues_of(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
  const CVector& vals = solver.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

CMatrix swap_conjugate(const CMatrix& m, int dim) {
  CMatrix out(m.rows(), m.cols());
  auto swapped = [dim](Eigen::Index i) { return (i % dim) * dim + i / dim; };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(swapped(i), swapped(j)) = m(i, j);
  return out;
}

CopyDecision failed(CopyFailure f, std::string detail) {
  CopyDecision d;
  d.failure = f;
  d.detail = std::move(detail);
  return d;
}

}  // namespace

std::string to_string(CopyFailure f) {
  switch (f) {
    case CopyFailure::TooMany: return "TooMany";
    case CopyFailure::NonCommuting: return "NonCommuting";
    case CopyFailure::SpectrumNotRootsOfUnity: return "SpectrumNotRootsOfUnity";
    case CopyFailure::NoLinearLabeling: return "NoLinearLabeling";
  }
  return "Unknown";
}

MESet::MESet(int dim, std::vector<Unitary> unitaries, Tolerance tol)
    : dim_(dim), unitaries_(std::move(unitaries)), tol_(tol) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "D must be at least 2");
  if (unitaries_.empty()) throw Error(ErrorKind::ValidationError, "set must contain at least one member");
  for (std::size_t j = 0; j < unitaries_.size(); ++j) {
    if (unitaries_[j].dim() != dim) {
      throw Error(ErrorKind::ShapeError, "member " + std::to_string(j) + " has dimension " +
                                             std::to_string(unitaries_[j].dim()) + ", expected " + std::to_string(dim));
    }
  }
  for (std::size_t i = 0; i < unitaries_.size(); ++i)
    for (std::size_t j = i + 1; j < unitaries_.size(); ++j) {
      const double overlap = std::abs((unitaries_[i].matrix().adjoint() * unitaries_[j].matrix()).trace());
      if (overlap > dim * tol.eps) {
        std::ostringstream os;
        os << "members " << i << " and " << j << " are not orthogonal (|Tr U_i^dag U_j| = " << overlap << ")";
        throw Error(ErrorKind::ValidationError, os.str());
      }
    }
}

StateVector MESet::state(int j) const {
  return kron(unitaries_.at(j).matrix(), CMatrix::Identity(dim_, dim_)) * canonical_bell(dim_);
}

std::vector<CMatrix> MESet::right_normalized() const {
  const CMatrix anchor_inv = unitaries_.front().matrix().adjoint();
  std::vector<CMatrix> out;
  out.reserve(unitaries_.size());
  for (const auto& u : unitaries_) out.push_back(u.matrix() * anchor_inv);
  return out;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

// A (U (x) I) A^dag = c U (x) U for a unit phase c; member states are rays,
// so the copy protocol only needs this weaker relation.
bool intertwines_up_to_phase(const CMatrix& a, const CMatrix& u, double eps) {
  const Eigen::Index d = u.rows();
  const CMatrix lhs = a * kron(u, CMatrix::Identity(d, d)) * a.adjoint();
  const CMatrix rhs = kron(u, u);
  const Complex c = (rhs.adjoint() * lhs).trace() / static_cast<double>(d * d);
  if (std::abs(std::abs(c) - 1.0) > eps) return false;
  return max_abs_diff(lhs, (c / std::abs(c)) * rhs) <= eps;
}

}  // namespace

bool check_intertwine(const Unitary& copier, const Unitary& u, Tolerance tol) {
  const int d = u.dim();
  if (copier.dim() != d * d) throw Error(ErrorKind::ShapeError, "copier dimension must be the square of the member dimension");
  const CMatrix& a = copier.matrix();
  const CMatrix lhs = a * kron(u.matrix(), CMatrix::Identity(d, d)) * a.adjoint();
  return max_abs_diff(lhs, kron(u.matrix(), u.matrix())) <= tol.eps;
}

PairVerdict copiable_pair(const Unitary& t, int dim, Tolerance tol) {
  if (t.dim() != dim) throw Error(ErrorKind::ShapeError, "copiable_pair: operator dimension differs from D");
  const Spectrum spec = eig_unitary(t, tol);
  const Complex ref = spec.eigenvalues[0] / std::abs(spec.eigenvalues[0]);

  std::ostringstream why;
  for (int order : divisors(dim)) {
    std::vector<int> counts(order, 0);
    bool on_lattice = true;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
      const int k = lattice_exponent(spec.eigenvalues[i] / ref, order, dim);
      if (k < 0) {
        on_lattice = false;
        break;
      }
      ++counts[k];
    }
    if (!on_lattice) {
      why << "M=" << order << ": spectrum off the root-of-unity lattice; ";
      continue;
    }
    if (std::all_of(counts.begin(), counts.end(), [&](int c) { return c == dim / order; })) {
      return PairVerdict{true, order, "spectrum is the full group of " + std::to_string(order) + "-th roots, degeneracy " +
                                          std::to_string(dim / order)};
    }
    why << "M=" << order << ": unequal degeneracies; ";
  }
  return PairVerdict{false, 0, why.str()};
}

bool spectral_similarity_oracle(const Unitary& t, int dim) {
  if (t.dim() != dim) throw Error(ErrorKind::ShapeError, "spectral_similarity_oracle: operator dimension differs from D");
  const CMatrix& m = t.matrix();
  const auto left = eigenvalues_of(kron(m, CMatrix::Identity(dim, dim)));
  const auto right = eigenvalues_of(kron(m, m));
  // Any admissible phase must carry some element of `right` onto left[0].
  for (const auto& r : right) {
    const Complex phase = left.front() / r;
    std::vector<Complex> rotated(right.size());
    std::transform(right.begin(), right.end(), rotated.begin(), [&](Complex z) { return phase * z; });
    if (multisets_match(left, rotated)) return true;
  }
  return false;
}

CopyDecision copiable_set_prime(const MESet& set) {
  const int dim = set.dim();
  if (!is_prime(dim)) {
    throw Error(ErrorKind::UnsupportedDimension, "local copying is decided only for prime D, got " + std::to_string(dim));
  }
  const Tolerance tol = set.tolerance();
  const auto members = set.right_normalized();
  const int n = set.size();

  if (n > dim) {
    return failed(CopyFailure::TooMany, "set has " + std::to_string(n) + " members but at most D = " + std::to_string(dim) +
                                            " can be locally copied");
  }

  CommonEigenbasis common;
  try {
    common = simultaneous_diagonalize(members, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotSimultaneouslyDiagonalizable) throw;
    return failed(CopyFailure::NonCommuting, e.what());
  }

  // exponents[j][c]: lattice exponent of column c relative to column 0.
  std::vector<std::vector<int>> exponents(n, std::vector<int>(dim));
  for (int j = 0; j < n; ++j) {
    const Complex first = common.diagonals[j][0];
    for (int c = 0; c < dim; ++c) {
      const int k = lattice_exponent(common.diagonals[j][c] / first, dim, dim);
      if (k < 0) {
        return failed(CopyFailure::SpectrumNotRootsOfUnity,
                      "member " + std::to_string(j) + " has an eigenvalue off the D-th root lattice after phase removal");
      }
      exponents[j][c] = k;
    }
  }

  auto is_identity = [&](int j) {
    return std::all_of(exponents[j].begin(), exponents[j].end(), [](int k) { return k == 0; });
  };
  int generator = -1;
  for (int j = 0; j < n && generator < 0; ++j)
    if (!is_identity(j)) generator = j;

  std::vector<int> label(dim);
  std::iota(label.begin(), label.end(), 0);
  std::vector<int> slope(n, 0), shift(n, 0);

  if (generator >= 0) {
    // Any valid labeling is an affine function of the generator's exponents.
    // Among the valid ones keep the labeling whose label-0 eigenvalues are
    // closest to 1, so phase-free members keep phase 1.
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<int> cand(dim), column_of(dim);
    std::vector<int> cand_slope(n), cand_shift(n);
    for (int a = 1; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        std::fill(column_of.begin(), column_of.end(), -1);
        bool bijective = true;
        for (int c = 0; c < dim && bijective; ++c) {
          const int l = mod(static_cast<long long>(a) * exponents[generator][c] + b, dim);
          bijective = column_of[l] < 0;
          column_of[l] = c;
          cand[c] = l;
        }
        if (!bijective) continue;
        bool linear = true;
        for (int j = 0; j < n && linear; ++j) {
          cand_shift[j] = exponents[j][column_of[0]];
          cand_slope[j] = mod(exponents[j][column_of[1]] - cand_shift[j], dim);
          for (int c = 0; c < dim && linear; ++c)
            linear = exponents[j][c] == mod(static_cast<long long>(cand_slope[j]) * cand[c] + cand_shift[j], dim);
        }
        if (!linear) continue;
        double score = 0.0;
        for (int j = 0; j < n; ++j) score += std::abs(common.diagonals[j][column_of[0]] - 1.0);
        if (score < best_score - 1e-12) {
          best_score = score;
          label = cand;
          slope = cand_slope;
          shift = cand_shift;
        }
      }
    }
    if (!std::isfinite(best_score)) {
      return failed(CopyFailure::NoLinearLabeling, "no basis labeling makes every exponent list linear (generator member " +
                                                       std::to_string(generator) + ")");
    }
  }

  CopyWitness w;
  w.dim = dim;
  w.basis.resize(dim, dim);
  for (int c = 0; c < dim; ++c) w.basis.col(label[c]) = common.basis.col(c);
  for (int j = 0; j < n; ++j) {
    w.exponents.push_back(slope[j]);
    const Complex p = common.diagonals[j][0] * omega(dim, shift[j]);
    w.phases.push_back(p / std::abs(p));
  }
  CopyDecision d;
  d.copiable = true;
  d.witness = std::move(w);
  return d;
}

double witness_residual(const MESet& set, const CopyWitness& witness) {
  const auto members = set.right_normalized();
  if (witness.exponents.size() != members.size() || witness.phases.size() != members.size()) {
    throw Error(ErrorKind::InvalidWitness, "witness size differs from set size");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    CVector diag(witness.dim);
    for (int k = 0; k < witness.dim; ++k) diag[k] = witness.phases[j] * omega(witness.dim, static_cast<long long>(witness.exponents[j]) * k);
    const CMatrix rebuilt = witness.basis * diag.asDiagonal() * witness.basis.adjoint();
    worst = std::max(worst, max_abs_diff(members[j], rebuilt));
  }
  return worst;
}

Unitary build_copier(const CopyWitness& witness) {
  if (witness.basis.rows() != witness.dim || !is_unitary(witness.basis, 1e-8)) {
    throw Error(ErrorKind::InvalidWitness, "witness basis is not a unitary of dimension D");
  }
  const CMatrix vv = kron(witness.basis, witness.basis);
  return Unitary(vv * gen_cnot(witness.dim).matrix() * vv.adjoint(), Tolerance{1e-8});
}

CMatrix bob_copier(const CMatrix& copier, const CMatrix& anchor) {
  const CMatrix t = anchor.transpose();
  const CMatrix c = anchor.conjugate();
  return kron(t, t) * copier.conjugate() * kron(c, c);
}

StateVector apply_local_pair(const StateVector& psi, int dim, const CMatrix& alice, const CMatrix& bob) {
  const std::array<int, 4> dims{dim, dim, dim, dim};
  const std::array<int, 4> split{0, 2, 1, 3};  // (1,2,3,4) <-> (1,3,2,4); an involution
  const int half = dim * dim;
  const StateVector grouped = permute_subsystems(psi, dims, split);
  CMatrix m(half, half);
  for (int r = 0; r < half; ++r)
    for (int c = 0; c < half; ++c) m(r, c) = grouped[r * half + c];
  const CMatrix moved = alice * m * bob.transpose();
  StateVector out(half * half);
  for (int r = 0; r < half; ++r)
    for (int c = 0; c < half; ++c) out[r * half + c] = moved(r, c);
  return permute_subsystems(out, dims, split);
}

StateVector execute_copy(const MESet& set, int j, const Unitary& copier) {
  const int dim = set.dim();
  if (j < 0 || j >= set.size()) throw Error(ErrorKind::ShapeError, "member index out of range");
  if (copier.dim() != dim * dim) throw Error(ErrorKind::ShapeError, "copier dimension must be D^2");
  const auto members = set.right_normalized();
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!intertwines_up_to_phase(copier.matrix(), members[i], set.tolerance().eps)) {
      throw Error(ErrorKind::ProtocolMismatch, "copier does not intertwine member " + std::to_string(i));
    }
  }
  const StateVector input = kron(set.state(j), set.state(0));
  return apply_local_pair(input, dim, copier.matrix(), bob_copier(copier.matrix(), set[0].matrix()));
}

double copy_fidelity(const MESet& set, int j, const StateVector& out) {
  const StateVector target = kron(set.state(j), set.state(j));
  return std::norm(target.dot(out));
}

void check_copier_structure(const CMatrix& copier, int dim, double eps) {
  const int n = dim * dim;
  if (copier.rows() != n || copier.cols() != n) throw Error(ErrorKind::ShapeError, "copier must be D^2 x D^2");
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          if (mod(k + l, dim) == a) continue;
          if (std::abs(copier(k * dim + l, a * dim + b)) > eps) {
            std::ostringstream os;
            os << "copier maps |" << a << ">|" << b << "> onto |" << k << ">|" << l << "> outside the k + l = a sector";
            throw Error(ErrorKind::StructureViolation, os.str());
          }
        }
}

Unitary random_structured_copier(int dim, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const int n = dim * dim;
  CMatrix a = CMatrix::Zero(n, n);
  for (int sector = 0; sector < dim; ++sector) {
    const CMatrix xi = random_unitary(dim, rng).matrix();
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) a(mod(sector - c, dim) * dim + c, sector * dim + b) = xi(b, c);
  }
  return Unitary(std::move(a), Tolerance{1e-8});
}

NullspaceScan lemma_nullspace_scan(const Unitary& copier, int dim, Tolerance tol) {
  check_copier_structure(copier.matrix(), dim, tol.eps);
  const int unknowns = dim * dim;
  const int equations = unknowns * unknowns;
  const CMatrix& a = copier.matrix();
  const CMatrix id = CMatrix::Identity(dim, dim);

  CMatrix system(equations, unknowns);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(p, q) = 1.0;
      const CMatrix image = a * kron(unit, id) * a.adjoint();
      const CMatrix antisym = image - swap_conjugate(image, dim);
      system.col(p * dim + q) = antisym.reshaped();
    }

  Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
  const double scale = std::max(1.0, svd.singularValues().maxCoeff());

  NullspaceScan scan;
  for (int i = 0; i < unknowns; ++i) {
    if (svd.singularValues()[i] > kDiagonalTolerance * scale) continue;
    const CVector v = svd.matrixV().col(i);
    CMatrix u(dim, dim);
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q) u(p, q) = v[p * dim + q];
    CMatrix off = u;
    off.diagonal().setZero();
    scan.max_offdiagonal = std::max(scan.max_offdiagonal, max_abs(off));
    scan.basis.push_back(std::move(u));
  }
  scan.all_diagonal = scan.max_offdiagonal <= kDiagonalTolerance;
  return scan;
}

}  // namespace locc
