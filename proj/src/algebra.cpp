#include "locc/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace locc {
namespace {

constexpr double kClusterThreshold = 1e-7;

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

std::vector<int> strides_of(std::span<const int> dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int t = static_cast<int>(dims.size()) - 2; t >= 0; --t) strides[t] = strides[t + 1] * dims[t + 1];
  return strides;
}

void check_dims(std::span<const int> dims, long long size, const char* what) {
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorKind::ShapeError, std::string(what) + ": subsystem dimensions must be positive");
  }
  if (product(dims) != size) {
    throw Error(ErrorKind::ShapeError, std::string(what) + ": product of subsystem dimensions does not match operand size");
  }
}

// Maps every input index to its output index under a factor permutation.
std::vector<int> permutation_map(std::span<const int> dims, std::span<const int> perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) throw Error(ErrorKind::ShapeError, "permutation length differs from factor count");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw Error(ErrorKind::ShapeError, "invalid factor permutation");
    seen[p] = true;
  }
  std::vector<int> out_dims(n);
  for (int t = 0; t < n; ++t) out_dims[t] = dims[perm[t]];
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);

  const int total = product(dims);
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    int out = 0;
    for (int t = 0; t < n; ++t) {
      const int digit = (idx / in_strides[perm[t]]) % dims[perm[t]];
      out += digit * out_strides[t];
    }
    map[idx] = out;
  }
  return map;
}

// Groups eigenvalue indices into clusters of nearly equal values.
std::vector<std::vector<int>> cluster(const CVector& values) {
  std::vector<std::vector<int>> clusters;
  std::vector<Complex> reps;
  for (int i = 0; i < values.size(); ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if (std::abs(values[i] - reps[c]) < kClusterThreshold) {
        clusters[c].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(values[i]);
      clusters.push_back({i});
    }
  }
  return clusters;
}

}  // namespace

Tolerance Tolerance::checked(double eps) {
  if (!(eps > 0.0) || !(eps < 1e-3)) {
    std::ostringstream os;
    os << "tolerance must lie in (0, 1e-3), got " << eps;
    throw Error(ErrorKind::PreconditionViolation, os.str());
  }
  return Tolerance{eps};
}

Unitary::Unitary(CMatrix mat, Tolerance tol) : mat_(std::move(mat)) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) throw Error(ErrorKind::ShapeError, "unitary must be a non-empty square matrix");
  if (!mat_.allFinite()) throw Error(ErrorKind::PreconditionViolation, "matrix has non-finite entries");
  if (!is_unitary(mat_, tol.eps)) throw Error(ErrorKind::PreconditionViolation, "matrix is not unitary");
}

Unitary Unitary::identity(int dim) { return Unitary(CMatrix::Identity(dim, dim), Unchecked{}); }

Unitary Unitary::adjoint() const { return Unitary(CMatrix(mat_.adjoint()), Unchecked{}); }

Unitary operator*(const Unitary& a, const Unitary& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::ShapeError, "unitary dimensions differ");
  return Unitary(CMatrix(a.mat_ * b.mat_), Unitary::Unchecked{});
}

Complex omega(int dim, long long k) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "root of unity requires D >= 2");
  return std::polar(1.0, 2.0 * kPi * mod(k, dim) / dim);
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::ShapeError, "matrix shapes differ");
  return max_abs(a - b);
}

bool is_unitary(const CMatrix& m, double eps) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m * m.adjoint(), CMatrix::Identity(m.rows(), m.cols())) <= eps;
}

bool is_hermitian(const CMatrix& m, double eps) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) <= eps;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const int> keep) {
  if (rho.rows() != rho.cols()) throw Error(ErrorKind::ShapeError, "partial_trace: operand is not square");
  check_dims(dims, rho.rows(), "partial_trace");
  const int n = static_cast<int>(dims.size());
  if (keep.empty()) throw Error(ErrorKind::ShapeError, "partial_trace: keep set is empty");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n || kept[k]) throw Error(ErrorKind::ShapeError, "partial_trace: invalid subsystem index in keep set");
    kept[k] = true;
  }

  // Move kept factors to the front, traced ones behind; then sum diagonal blocks.
  std::vector<int> perm;
  for (int t = 0; t < n; ++t)
    if (kept[t]) perm.push_back(t);
  int dk = 1;
  for (int t : perm) dk *= dims[t];
  for (int t = 0; t < n; ++t)
    if (!kept[t]) perm.push_back(t);
  const int dt = static_cast<int>(rho.rows()) / dk;

  const CMatrix permuted = permute_subsystems(rho, dims, perm);
  CMatrix out = CMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int r = 0; r < dt; ++r) acc += permuted(i * dt + r, j * dt + r);
      out(i, j) = acc;
    }
  return out;
}

CVector permute_subsystems(const CVector& v, std::span<const int> dims, std::span<const int> perm) {
  check_dims(dims, v.size(), "permute_subsystems");
  const auto map = permutation_map(dims, perm);
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[map[i]] = v[i];
  return out;
}

CMatrix permute_subsystems(const CMatrix& m, std::span<const int> dims, std::span<const int> perm) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeError, "permute_subsystems: operand is not square");
  check_dims(dims, m.rows(), "permute_subsystems");
  const auto map = permutation_map(dims, perm);
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

Spectrum eig_unitary(const CMatrix& u, Tolerance tol) {
  if (u.rows() == 0 || u.rows() != u.cols()) throw Error(ErrorKind::ShapeError, "eig_unitary: operand is not square");
  if (!is_unitary(u, tol.eps)) throw Error(ErrorKind::PreconditionViolation, "eig_unitary: operand is not unitary");
  // A normal matrix has a diagonal Schur form, and the Schur vectors stay
  // orthonormal inside degenerate eigenspaces.
  Eigen::ComplexSchur<CMatrix> schur(u);
  return Spectrum{schur.matrixT().diagonal(), schur.matrixU()};
}

CommonEigenbasis simultaneous_diagonalize(std::span<const CMatrix> us, Tolerance tol) {
  if (us.empty()) throw Error(ErrorKind::ShapeError, "simultaneous_diagonalize: empty family");
  const Eigen::Index dim = us.front().rows();
  for (const auto& u : us) {
    if (u.rows() != dim || u.cols() != dim) throw Error(ErrorKind::ShapeError, "simultaneous_diagonalize: dimensions differ");
    if (!is_unitary(u, tol.eps)) throw Error(ErrorKind::PreconditionViolation, "simultaneous_diagonalize: operand is not unitary");
  }
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      const double c = max_abs(us[i] * us[j] - us[j] * us[i]);
      if (c > tol.eps) {
        std::ostringstream os;
        os << "members " << i << " and " << j << " do not commute (commutator max-abs " << c << ")";
        throw Error(ErrorKind::NotSimultaneouslyDiagonalizable, os.str());
      }
    }

  CMatrix basis = CMatrix::Identity(dim, dim);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks{{0, dim}};  // (start, size)
  for (const auto& u : us) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> refined;
    for (auto [start, size] : blocks) {
      if (size == 1) {
        refined.emplace_back(start, size);
        continue;
      }
      const CMatrix cols = basis.middleCols(start, size);
      const CMatrix restricted = cols.adjoint() * u * cols;
      Eigen::ComplexSchur<CMatrix> schur(restricted);
      const CVector vals = schur.matrixT().diagonal();
      const CMatrix rotated = cols * schur.matrixU();
      Eigen::Index offset = start;
      for (const auto& members : cluster(vals)) {
        for (std::size_t m = 0; m < members.size(); ++m) basis.col(offset + m) = rotated.col(members[m]);
        refined.emplace_back(offset, static_cast<Eigen::Index>(members.size()));
        offset += static_cast<Eigen::Index>(members.size());
      }
    }
    blocks = std::move(refined);
  }

  CommonEigenbasis out{basis, {}};
  out.diagonals.reserve(us.size());
  for (const auto& u : us) out.diagonals.push_back((basis.adjoint() * u * basis).diagonal());
  return out;
}

double phase_angle(Complex z) {
  double a = std::arg(z);
  if (a < 0) a += 2.0 * kPi;
  return a;
}

double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace locc
